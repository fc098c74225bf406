"""Command-line interface.

Every subcommand accepts ``--seed``, ``--trials``, ``--out``, ``--format`` and
``--config``.  Values from a ``--config`` JSON file are overridden by flags
given on the command line.  Exit codes: 0 success, 2 configuration error,
3 failed acceptance check (``verify``), 1 anything else.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import optimizer
from .dtblas import DtblasParams, dtblas_select
from .errors import ConfigError, InvalidArgument, RegimeError, SizeCapError
from .harness.acceptance import CRITERIA, verify
from .harness.config import load_config, make_config
from .harness.report import clean, emit
from .harness.runner import run
from .model import generate_network, load_instance
from .tblas import TblasParams, tblas_select

EXIT_OK, EXIT_ERROR, EXIT_CONFIG, EXIT_ACCEPTANCE = 0, 1, 2, 3


def _rho(text: str) -> float:
    if text.lower() in ("inf", "infinity"):
        return math.inf
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--seed", type=int, default=None, help="base seed (default 0; verify: 42)")
    g.add_argument("--trials", type=int, default=None, help="number of Monte Carlo trials")
    g.add_argument("--out", default=None, help="output file (default: stdout)")
    g.add_argument("--format", choices=("csv", "json"), default=None, help="output format")
    g.add_argument("--config", default=None, help="JSON config file; flags override it")
    g.add_argument("--workers", type=int, default=1, help="worker processes for trials")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="ratelink",
                                     description="Rate-constrained link activation toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="emit a network instance as JSON")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rho", type=_rho, default=math.inf)
    p.add_argument("--stream-id", type=int, default=0)
    p.add_argument("--no-gains", action="store_true", help="omit the gain matrix")

    for name, helptext in (("tblas", "single-threshold activation"),
                           ("dtblas", "double-threshold activation")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--instance", help="instance JSON (otherwise generated from --n/--seed)")
        p.add_argument("--n", type=int)
        p.add_argument("--rho", type=_rho)
        if name == "tblas":
            p.add_argument("--alpha", type=float)
            p.add_argument("--threshold", type=float, help="explicit Delta")
            p.add_argument("--check", choices=("count", "rate"),
                           help="run the count or rate concentration experiment instead")
        else:
            p.add_argument("--lam", type=float, help="design for this demanded rate")
            p.add_argument("--Delta", type=float)
            p.add_argument("--delta", type=float)
            p.add_argument("--mode", choices=("exact", "greedy"), default=None)
            p.add_argument("--epsilon", type=float)
            p.add_argument("--check", choices=("window",),
                           help="run the active-count window experiment instead")

    p = sub.add_parser("optimize", parents=[common], help="optimal design for one rate")
    p.add_argument("--lam", type=float, required=True)
    p.add_argument("--asymptotic", choices=("large", "small"),
                   help="also report the leading-order expansion")

    p = sub.add_parser("sweep", parents=[common], help="operating points over a rate grid")
    p.add_argument("--lambda-min", type=float)
    p.add_argument("--lambda-max", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--spacing", choices=("linear", "log"))

    p = sub.add_parser("noise-limited", parents=[common], help="noise-limited Monte Carlo")
    p.add_argument("--n", type=int)
    p.add_argument("--beta", type=float)
    p.add_argument("--rho", type=_rho)
    p.add_argument("--gamma0", type=float)
    p.add_argument("--mode", choices=("exact", "greedy"))

    p = sub.add_parser("clique-window", parents=[common], help="G(m, p) clique windows")
    p.add_argument("--m", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--regime", choices=("fixed_p", "vanishing_p"))
    p.add_argument("--reading", choices=("nested", "product"))

    p = sub.add_parser("second-moment", parents=[common], help="clique count moments")
    p.add_argument("--m", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--s", type=int, nargs="+")

    p = sub.add_parser("brute-sandwich", parents=[common], help="strategies vs exhaustive optimum")
    p.add_argument("--n", type=int)
    p.add_argument("--lam", type=float)
    p.add_argument("--rho", type=_rho)

    p = sub.add_parser("verify", parents=[common], help="run the acceptance checks")
    p.add_argument("--only", type=int, nargs="+", choices=sorted(CRITERIA),
                   help="restrict to these criteria")
    return parser


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _experiment(args, experiment: str, params: dict, n=None) -> int:
    params = {k: v for k, v in params.items() if v is not None}
    overrides: dict = {}
    if params:
        overrides["params"] = params
    if n is not None:
        overrides["n"] = n
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.seed is not None:
        overrides["base_seed"] = args.seed
    if args.out is not None:
        overrides["out"] = args.out
    if args.config:
        cfg = load_config(args.config, **overrides)
        if cfg.experiment != experiment:
            raise ConfigError("experiment", f"config is for {cfg.experiment!r}, not {experiment!r}")
    else:
        cfg = make_config(experiment, **overrides)
    report = run(cfg, args.workers)
    fmt = args.format or ("csv" if experiment == "sweep" else "json")
    text = emit(report, fmt)
    _write(text, cfg.out)
    return EXIT_OK


def _instance(args):
    if args.instance:
        inst = load_instance(args.instance)
        return inst.with_rho(args.rho) if args.rho is not None else inst
    if args.n is None:
        raise ConfigError("n", "give --n or --instance")
    rho = math.inf if args.rho is None else args.rho
    return generate_network(args.n, rho, args.seed or 0)


def _emit_set(args, aset, extra: dict) -> int:
    if (args.format or "json") == "json":
        doc = {**clean(extra), **clean(aset.to_dict()), "size": aset.size,
               "throughput": clean(aset.throughput)}
        _write(json.dumps(doc, indent=1) + "\n", args.out)
    else:
        lines = ["link,sinr,rate,interference"]
        for i, g, r, itf in zip(aset.links, aset.sinr, aset.rates, aset.interference):
            lines.append(f"{int(i) + 1},{g:.12g},{r:.12g},{itf:.12g}")
        _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_gen(args) -> int:
    inst = generate_network(args.n, args.rho, args.seed or 0, args.stream_id)
    if args.format == "csv":
        raise ConfigError("format", "gen emits JSON only")
    doc = inst.to_dict(include_gains=not args.no_gains)
    _write(json.dumps(doc) + "\n", args.out)
    return EXIT_OK


def cmd_tblas(args) -> int:
    if args.check:
        exp = "tblas_conc" if args.check == "count" else "rate_conc"
        return _experiment(args, exp, {"alpha": args.alpha, "rho": args.rho}, args.n)
    inst = _instance(args)
    if args.threshold is not None:
        threshold = args.threshold
    else:
        threshold = TblasParams.from_alpha(inst.n, args.alpha or 1.0).delta_threshold
    return _emit_set(args, tblas_select(inst, threshold), {"threshold": threshold})


def cmd_dtblas(args) -> int:
    if args.check:
        return _experiment(args, "dtblas_window",
                           {"lam": args.lam, "Delta": args.Delta, "delta": args.delta,
                            "rho": args.rho, "mode": args.mode, "epsilon": args.epsilon},
                           args.n)
    inst = _instance(args)
    if args.Delta is not None or args.delta is not None:
        if args.Delta is None or args.delta is None:
            raise ConfigError("Delta", "Delta and delta must be given together")
        params = DtblasParams(args.Delta, args.delta)
    else:
        params = DtblasParams.optimal(inst.n, args.lam or 1.0)
    res = dtblas_select(inst, params, args.mode or "exact", seed=args.seed or 0)
    return _emit_set(args, res.active, {"Delta": params.Delta, "delta": params.delta,
                                        "k1": res.k1, "certificate": res.clique_certificate})


def cmd_optimize(args) -> int:
    pt = optimizer.optimal_point(args.lam)
    doc = {"lambda": pt.lam, "gamma0": pt.gamma0, "delta_star": pt.delta_star,
           "alpha_prime_star": pt.alpha_prime_star, "kappa_star": pt.kappa_star,
           "tau_star": pt.tau_star, "rbar": pt.rbar, "residual": pt.residual}
    if args.asymptotic:
        ap = optimizer.asymptotic_point(args.lam, args.asymptotic)
        doc["asymptotic"] = {"regime": args.asymptotic, "delta": ap.delta_star,
                             "alpha_prime": ap.alpha_prime_star, "kappa": ap.kappa_star,
                             "tau": ap.tau_star, "residual": ap.residual}
    if args.format == "csv":
        keys = [k for k in doc if k != "asymptotic"]
        text = ",".join(keys) + "\n" + ",".join(f"{doc[k]:.12g}" for k in keys) + "\n"
    else:
        text = json.dumps(clean(doc), indent=1) + "\n"
    _write(text, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    seed = 42 if args.seed is None else args.seed
    report = verify(seed, args.workers, args.only,
                    echo=lambda line: print(line, file=sys.stderr, flush=True))
    _write(report.body() + "\n", args.out)
    print(("all criteria passed" if report.passed else "some criteria FAILED"), file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_ACCEPTANCE


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "gen":
            return cmd_gen(args)
        if args.command == "tblas":
            return cmd_tblas(args)
        if args.command == "dtblas":
            return cmd_dtblas(args)
        if args.command == "optimize":
            return cmd_optimize(args)
        if args.command == "sweep":
            return _experiment(args, "sweep", {"lambda_min": args.lambda_min,
                                               "lambda_max": args.lambda_max,
                                               "points": args.points, "spacing": args.spacing})
        if args.command == "noise-limited":
            return _experiment(args, "noise_limited",
                               {"beta": args.beta, "rho": args.rho, "gamma0": args.gamma0,
                                "mode": args.mode}, args.n)
        if args.command == "clique-window":
            return _experiment(args, "clique_window",
                               {"m": args.m, "p": args.p, "epsilon": args.epsilon,
                                "regime": args.regime, "reading": args.reading})
        if args.command == "second-moment":
            return _experiment(args, "second_moment", {"m": args.m, "p": args.p, "s": args.s})
        if args.command == "brute-sandwich":
            return _experiment(args, "brute_sandwich", {"lam": args.lam, "rho": args.rho}, args.n)
        if args.command == "verify":
            return cmd_verify(args)
    except (ConfigError, InvalidArgument, RegimeError, SizeCapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
