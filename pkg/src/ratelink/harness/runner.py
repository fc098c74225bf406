"""Run an experiment's trials, optionally across worker processes, and reduce them."""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from ..random_graph import expected_clique_count, variance_ratio
from .config import ExperimentConfig
from .report import ExperimentReport, clean
from .trials import TRIALS

MEAN_COLUMNS: dict[str, tuple[str, ...]] = {
    "tblas_conc": ("k1",),
    "rate_conc": ("k1", "min_rate", "max_rate", "mean_rate", "max_rate_deviation"),
    "dtblas_window": ("k1", "k2", "mean_rate", "throughput"),
    "clique_window": ("clique_number",),
    "noise_limited": ("k1", "k2", "mean_rate", "throughput", "max_interference",
                      "interference_deviation"),
    "brute_sandwich": ("k_tblas", "k_dtblas", "k_brute"),
}


def _job(args) -> tuple[int, dict]:
    cfg, n, trial = args
    seed = cfg.seed_for(trial)
    rec = TRIALS[cfg.experiment](cfg, n, seed)
    return trial, {"trial": trial, "seed": seed, "n": n, **rec}


def mean_se(values) -> tuple[float, float]:
    """Sample mean and standard error, ignoring NaN entries."""
    x = np.asarray([v for v in values if v is not None], dtype=float)
    x = x[~np.isnan(x)]
    if x.size == 0:
        return math.nan, math.nan
    se = float(x.std(ddof=1) / math.sqrt(x.size)) if x.size > 1 else math.nan
    return float(x.mean()), se


def ratio_jackknife(x) -> tuple[float, float]:
    """``Var/Mean^2`` of a sample and its jackknife standard error."""
    x = np.asarray(x, dtype=float)
    n = x.size
    mean = x.mean()
    est = x.var(ddof=1) / mean**2
    s1, s2 = x.sum(), np.square(x).sum()
    m_i = (s1 - x) / (n - 1)
    v_i = (s2 - x**2 - (n - 1) * m_i**2) / (n - 2)
    r_i = v_i / m_i**2
    se = math.sqrt((n - 1) / n * float(np.sum((r_i - r_i.mean()) ** 2)))
    return float(est), se


def _frequency(records, key) -> float:
    return sum(1 for r in records if r[key]) / len(records)


def _conditional_frequency(records, key):
    vals = [r[key] for r in records if r[key] is not None]
    return (sum(vals) / len(vals) if vals else None), len(vals)


def aggregate(cfg: ExperimentConfig, records: list[dict]) -> dict:
    exp = cfg.experiment
    agg: dict = {"trials": len(records)}
    if exp == "sweep":
        agg.update({"points": len(records)})
        return agg
    for key in records[0]:
        if key.startswith("hit_"):
            agg[f"freq_{key[4:]}"] = _frequency(records, key)
    for key in MEAN_COLUMNS.get(exp, ()):
        m, se = mean_se(r[key] for r in records)
        agg[f"mean_{key}"], agg[f"se_{key}"] = m, se
    if exp == "second_moment":
        p, k = cfg.params, cfg.slack["se"]
        for s in p["s"]:
            ys = [r[f"Y_{s}"] for r in records]
            m, se = mean_se(ys)
            mu = expected_clique_count(p["m"], p["p"], s)
            agg[f"mean_Y_{s}"], agg[f"se_Y_{s}"], agg[f"mu_{s}"] = m, se, mu
            agg[f"mean_within_se_{s}"] = bool(abs(m - mu) <= k * se)
            if s >= 2 and len(ys) > 2 and np.mean(ys) > 0:
                est, rse = ratio_jackknife(ys)
                oracle = variance_ratio(p["m"], p["p"], s)
                agg[f"var_ratio_hat_{s}"], agg[f"var_ratio_se_{s}"] = est, rse
                agg[f"var_ratio_{s}"] = oracle
                agg[f"var_ratio_within_se_{s}"] = bool(abs(est - oracle) <= k * rse)
    if exp == "noise_limited":
        freq, count = _conditional_frequency(records, "rate_guarantee")
        agg["qualifying_trials"] = count
        agg["freq_rate_guarantee_qualifying"] = freq
        agg["snr_monotone_all"] = all(r["snr_monotone"] for r in records)
    if exp == "brute_sandwich":
        freq, count = _conditional_frequency(records, "ordered")
        agg["both_feasible_trials"] = count
        agg["freq_ordered_both_feasible"] = freq
        for key in ("raw_dtblas_le_brute", "raw_tblas_le_dtblas", "tblas_feasible",
                    "dtblas_feasible", "brute_feasible", "dtblas_certified"):
            agg[f"freq_{key}"] = _frequency(records, key)
    return agg


def run(cfg: ExperimentConfig, workers: int = 1) -> ExperimentReport:
    """Execute every trial and reduce; the result does not depend on ``workers``."""
    start = time.perf_counter()
    jobs = [(cfg, n, t) for n in cfg.n_grid for t in range(cfg.trials)]
    if workers > 1 and len(jobs) > 1:
        chunk = max(1, len(jobs) // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_job, jobs, chunksize=chunk))
    else:
        results = [_job(j) for j in jobs]
    # reduce in (grid position, trial) order regardless of completion order
    pos = {n: i for i, n in enumerate(cfg.n_grid)}
    records = [r for _, r in sorted(results, key=lambda tr: (pos[tr[1]["n"]], tr[0]))]

    if cfg.experiment == "sweep":
        (only,) = records
        records = only["rows"]
        agg = aggregate(cfg, records)
        agg["freq_upper_bound"] = float(only["hit_upper_bound"])
        agg["freq_dominates_tblas"] = float(only["hit_dominates_tblas"])
    elif isinstance(cfg.n, tuple):
        agg = {f"n={n}": aggregate(cfg, [r for r in records if r["n"] == n]) for n in cfg.n}
    else:
        agg = aggregate(cfg, records)
    return ExperimentReport(clean(cfg.to_dict()), clean(records), clean(agg),
                            time.perf_counter() - start)
