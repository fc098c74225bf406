#!/usr/bin/env python3
"""Noise-limited design across a grid of network sizes.

Prints, per n, the median and mean of the worst interference deviation
max_i |I_i - beta| next to the bound beta log log n / sqrt(log n), plus the
mean number of active links against floor(log n / log log n).
"""

import argparse

import numpy as np

from ratelink.harness import make_config, run


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[10_000, 100_000, 1_000_000])
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--beta", type=float, default=1.0)
    ap.add_argument("--rho", type=float, default=10.0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    cfg = make_config("noise_limited", n=args.n, trials=args.trials, base_seed=args.seed,
                      params={"beta": args.beta, "rho": args.rho})
    report = run(cfg, args.workers)
    print("n          median_dev  mean_dev  bound    mean_k2  predicted_k2")
    for n in args.n:
        recs = [r for r in report.records if r["n"] == n]
        dev = np.array([r["interference_deviation"] for r in recs], dtype=float)
        k2 = np.mean([r["k2"] for r in recs])
        print(f"{n:<10d} {np.nanmedian(dev):10.4f} {np.nanmean(dev):9.4f} "
              f"{recs[0]['deviation_bound']:8.4f} {k2:8.2f} {recs[0]['predicted_k2']:6d}")


if __name__ == "__main__":
    main()
