#!/usr/bin/env python3
"""Run harness experiments at their default settings and save JSON and CSV reports."""

import argparse
from pathlib import Path

from ratelink.harness import EXPERIMENTS, emit, make_config, run


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("experiments", nargs="*", default=list(EXPERIMENTS),
                    help=f"subset of {', '.join(EXPERIMENTS)}")
    ap.add_argument("--outdir", default="results")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int, default=None, help="override every trial count")
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for name in args.experiments:
        kw = {"base_seed": args.seed}
        if args.trials is not None and name != "sweep":
            kw["trials"] = args.trials
        report = run(make_config(name, **kw), args.workers)
        emit(report, "json", outdir / f"{name}.json")
        emit(report, "csv", outdir / f"{name}.csv")
        freqs = {k: v for k, v in report.aggregates.items() if k.startswith("freq_")}
        print(f"{name:16s} {report.wall_clock:7.1f}s  {freqs}")


if __name__ == "__main__":
    main()
