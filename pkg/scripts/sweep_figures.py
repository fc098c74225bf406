#!/usr/bin/env python3
"""Write the operating-point sweep used for the scaling and tradeoff curves.

Each row holds the optimal DTBLAS design for one demanded rate together with
the TBLAS scaling factors and the upper bound 1/lambda.  Plot ``kappa_*``
against ``lambda`` for the tradeoff curve and ``tau_*`` for the throughput
scaling curve.
"""

import argparse

from ratelink.harness import emit, make_config, run


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="sweep.csv")
    ap.add_argument("--lambda-min", type=float, default=0.05)
    ap.add_argument("--lambda-max", type=float, default=20.0)
    ap.add_argument("--points", type=int, default=100)
    ap.add_argument("--spacing", choices=("linear", "log"), default="linear")
    args = ap.parse_args()
    cfg = make_config("sweep", params={"lambda_min": args.lambda_min,
                                       "lambda_max": args.lambda_max,
                                       "points": args.points, "spacing": args.spacing})
    report = run(cfg)
    emit(report, "csv", args.out)
    print(f"wrote {len(report.records)} rows to {args.out}")


if __name__ == "__main__":
    main()
