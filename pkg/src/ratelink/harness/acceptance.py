"""Acceptance checks 1-12 and the ``verify`` driver.

Each check returns a :class:`CriterionResult`.  ``passed`` depends only on
deterministic quantities; wall-clock time is kept alongside but outside the
report body so two runs with the same seed produce byte-identical bodies.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .. import optimizer
from ..bounds import sinr_ccdf_random_set
from ..model import annotate, generate_network, rate, sinr, throughput
from ..random_graph import clique_window_fixed_p
from ..rng import exponentials
from ..tblas import rate_concentration_bound
from .config import make_config
from .report import clean
from .runner import run

# Wall-clock budget per check, in seconds.
BUDGETS = {1: 5, 2: 30, 3: 60, 4: 180, 5: 5, 6: 5, 7: 5, 8: 300, 9: 120, 10: 120, 11: 180,
           12: 60}

CCDF_STREAM = 0x63636466


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    metrics: dict
    elapsed: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"criterion {self.number:2d} {status}  {self.title}  ({self.elapsed:.1f}s)"


@dataclass
class VerifyReport:
    seed: int
    results: list[CriterionResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def body(self) -> str:
        doc = {"seed": self.seed,
               "criteria": [{"criterion": r.number, "title": r.title, "passed": r.passed,
                             "metrics": clean(r.metrics)} for r in self.results]}
        return json.dumps(doc, indent=1, allow_nan=False)

    def timings(self) -> dict[int, float]:
        return {r.number: r.elapsed for r in self.results}


def _rel_close(a: float, b: float, tol: float) -> bool:
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= tol * max(abs(a), abs(b), 1e-300) or a == b


def _scalar_sinr(gains: np.ndarray, noise: float, active: list[int], i: int) -> float:
    interference = 0.0
    for j in active:
        if j != i:
            interference += gains[i, j]
    denom = noise + interference
    return gains[i, i] / denom if denom > 0 else math.inf


def criterion_1(seed: int, workers: int = 1) -> CriterionResult:
    """Vectorised SINR/rate/throughput against a scalar loop on 1000 random pairs."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    mismatches = 0
    for k in range(1000):
        n = int(rng.integers(1, 41))
        rho = math.inf if rng.random() < 0.3 else float(rng.uniform(0.5, 50.0))
        inst = generate_network(n, rho, seed=seed + k, stream_id=k)
        active = sorted(int(i) for i in np.flatnonzero(rng.random(n) < rng.random()))
        gains = inst.gains
        aset = annotate(inst, active)
        total = 0.0
        for pos, i in enumerate(active):
            want = _scalar_sinr(gains, inst.noise, active, i)
            want_rate = math.log1p(want)
            total += want_rate
            got = (aset.sinr[pos], sinr(inst, active, i), aset.rates[pos], rate(inst, active, i))
            for g, w in zip(got, (want, want, want_rate, want_rate)):
                if not _rel_close(float(g), w, 1e-12):
                    mismatches += 1
                elif not math.isinf(w) and w != 0:
                    worst = max(worst, abs(float(g) - w) / abs(w))
        if not _rel_close(throughput(inst, active), total, 1e-12):
            mismatches += 1
    return CriterionResult(1, "formula oracles", mismatches == 0,
                           {"pairs": 1000, "mismatches": mismatches, "max_rel_error": worst})


def ccdf_grid() -> list[tuple[float, int, float]]:
    return [(x, k, rho) for x in (0.5, 2.0) for k in (1, 3, 6) for rho in (2.0, math.inf)]


def ccdf_monte_carlo(x: float, k: int, rho: float, draws: int, seed: int, stream: int,
                     chunk: int = 250_000) -> float:
    """Fraction of draws with ``g / (1/rho + sum of k-1 gains) > x``."""
    noise = 0.0 if math.isinf(rho) else 1.0 / rho
    hits = 0
    cols = np.arange(k)[None, :]
    for start in range(0, draws, chunk):
        rows = np.arange(start, min(start + chunk, draws))[:, None]
        e = exponentials(seed, stream, cols, rows)
        denom = noise + e[:, 1:].sum(axis=1)
        with np.errstate(divide="ignore"):
            hits += int(np.count_nonzero(e[:, 0] / denom > x))
    return hits / draws


def criterion_2(seed: int, workers: int = 1) -> CriterionResult:
    draws = 1_000_000
    points = []
    ok = True
    for idx, (x, k, rho) in enumerate(ccdf_grid()):
        p = sinr_ccdf_random_set(x, k, rho)
        est = ccdf_monte_carlo(x, k, rho, draws, seed, CCDF_STREAM + idx)
        se = math.sqrt(p * (1 - p) / draws)
        hit = abs(est - p) <= 3 * se
        ok &= hit
        points.append({"x": x, "k": k, "rho": rho, "formula": p, "monte_carlo": est,
                       "se": se, "hit": hit})
    return CriterionResult(2, "SINR ccdf law", ok, {"draws": draws, "grid": points})


def _freq_check(number, title, cfg, key, threshold, workers) -> CriterionResult:
    rep = run(cfg, workers)
    freq = rep.aggregates[key]
    return CriterionResult(number, title, freq >= threshold,
                           {key: freq, "threshold": threshold, "aggregates": rep.aggregates})


def criterion_3(seed: int, workers: int = 1) -> CriterionResult:
    cfg = make_config("tblas_conc", n=100_000, trials=200, base_seed=seed,
                      params={"alpha": 1.0}, slack={"width": 3.0})
    return _freq_check(3, "TBLAS count concentration", cfg, "freq_count", 0.97, workers)


def criterion_4(seed: int, workers: int = 1) -> CriterionResult:
    cfg = make_config("rate_conc", n=1_000_000, trials=50, base_seed=seed,
                      params={"alpha": 2.0}, slack={"rate": 1.5})
    res = _freq_check(4, "TBLAS rate concentration", cfg, "freq_rate", 0.9, workers)
    res.metrics["bound"] = rate_concentration_bound(1_000_000, 2.0)
    return res


OPTIMIZER_LAMBDAS = (0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0)


def criterion_5(seed: int, workers: int = 1) -> CriterionResult:
    rows = []
    ok = True
    for lam in OPTIMIZER_LAMBDAS:
        pt = optimizer.optimal_point(lam)
        grid = np.geomspace(pt.delta_star / 10, pt.delta_star * 10, 10_000)
        values = np.array([optimizer.objective(d, pt.gamma0) for d in grid])
        best = optimizer.objective(pt.delta_star, pt.gamma0)
        grid_ok = best <= values.min() + 1e-12 * abs(values.min())
        _, _, rbar = optimizer.scaling_factors(pt.delta_star, pt.alpha_prime_star)
        row = {"lambda": lam, "delta_star": pt.delta_star, "residual": pt.residual,
               "grid_ok": bool(grid_ok), "rbar_error": abs(rbar - lam)}
        ok &= abs(pt.residual) < 1e-10 and grid_ok and abs(rbar - lam) <= 1e-8
        rows.append(row)
    return CriterionResult(5, "optimizer correctness", ok, {"points": rows})


def criterion_6(seed: int, workers: int = 1) -> CriterionResult:
    rows = []
    ok = True
    for lam in (6.0, 8.0, 10.0):
        pt = optimizer.optimal_point(lam)
        d_err = abs(pt.delta_star - 2 * math.exp(-lam))
        k_err = abs(pt.kappa_star - 1 / lam)
        hit = d_err <= 10 * math.exp(-2 * lam) and k_err <= 5 / lam**2
        ok &= hit
        rows.append({"lambda": lam, "delta_error": d_err, "delta_band": 10 * math.exp(-2 * lam),
                     "kappa_error": k_err, "kappa_band": 5 / lam**2, "hit": hit})
    for lam in (0.01, 0.02, 0.05):
        pt = optimizer.optimal_point(lam)
        d_err = abs(pt.delta_star - (1 / lam + 0.5))
        hit = d_err <= 10 * lam
        ok &= hit
        rows.append({"lambda": lam, "delta_error": d_err, "delta_band": 10 * lam, "hit": hit})
    return CriterionResult(6, "optimizer asymptotics", ok, {"points": rows})


def criterion_7(seed: int, workers: int = 1) -> CriterionResult:
    cfg = make_config("sweep", params={"lambda_min": 0.05, "lambda_max": 20.0, "points": 100})
    rep = run(cfg)
    agg = rep.aggregates
    ok = agg["freq_upper_bound"] == 1.0 and agg["freq_dominates_tblas"] == 1.0
    return CriterionResult(7, "bound dominance", ok, {"aggregates": agg})


def criterion_8(seed: int, workers: int = 1) -> CriterionResult:
    fixed = make_config("clique_window", trials=50, base_seed=seed,
                        params={"m": 200, "p": 0.5, "epsilon": 0.2, "regime": "fixed_p",
                                "reading": "nested"})
    rep_a = run(fixed, workers)
    alt = clique_window_fixed_p(200, 0.5, 0.2, "product")
    alt_freq = sum(r["clique_number"] in alt for r in rep_a.records) / len(rep_a.records)
    vanishing = make_config("clique_window", trials=20, base_seed=seed,
                            params={"m": 2000, "p": 0.05, "epsilon": 0.1,
                                    "regime": "vanishing_p"}, slack={"near": 1})
    rep_b = run(vanishing, workers)
    fa = rep_a.aggregates["freq_window"]
    fb = rep_b.aggregates["freq_near"]
    ok = fa >= 0.9 and fb >= 0.8
    return CriterionResult(8, "clique windows", ok, {
        "fixed_p_freq_window": fa, "fixed_p_window": [rep_a.records[0]["window_lower"],
                                                      rep_a.records[0]["window_upper"]],
        "fixed_p_product_reading_window": [alt.lower, alt.upper],
        "fixed_p_product_reading_freq": alt_freq,
        "vanishing_p_freq_near": fb,
        "vanishing_p_freq_window": rep_b.aggregates["freq_window"],
        "vanishing_p_window": [rep_b.records[0]["window_lower"], rep_b.records[0]["window_upper"]],
        "clique_numbers_fixed_p": [r["clique_number"] for r in rep_a.records],
        "clique_numbers_vanishing_p": [r["clique_number"] for r in rep_b.records],
    })


def criterion_9(seed: int, workers: int = 1) -> CriterionResult:
    cfg = make_config("second_moment", trials=2000, base_seed=seed,
                      params={"m": 30, "p": 0.3, "s": [3, 4]})
    agg = run(cfg, workers).aggregates
    ok = agg["mean_within_se_3"] and agg["mean_within_se_4"] and agg["var_ratio_within_se_3"]
    return CriterionResult(9, "second moment", bool(ok), {"aggregates": agg})


def criterion_10(seed: int, workers: int = 1) -> CriterionResult:
    cfg = make_config("brute_sandwich", n=12, trials=100, base_seed=seed,
                      params={"lam": math.log(2), "rho": 10.0}, slack={"order": 1})
    agg = run(cfg, workers).aggregates
    ordered = agg["freq_ordered_both_feasible"]
    ok = (agg["freq_oracle"] == 1.0 and agg["freq_certificate"] == 1.0
          and agg["freq_brute_feasible"] == 1.0 and ordered is not None and ordered >= 0.9)
    return CriterionResult(10, "brute-force sandwich", ok, {"aggregates": agg,
                                                            "ordered_threshold": 0.9})


def criterion_11(seed: int, workers: int = 1) -> CriterionResult:
    cfg = make_config("noise_limited", n=1_000_000, trials=50, base_seed=seed,
                      params={"beta": 1.0, "rho": 10.0, "gamma0": 1.0})
    agg = run(cfg, workers).aggregates
    parts = {
        "a_interference": agg["freq_deviation"] >= 0.85,
        "b_rate_guarantee": agg["freq_rate_guarantee_qualifying"] in (None, 1.0),
        "c_throughput": agg["freq_throughput"] >= 0.8,
        "d_snr_monotone": bool(agg["snr_monotone_all"]),
    }
    return CriterionResult(11, "noise-limited regime", all(parts.values()),
                           {"parts": parts, "aggregates": agg})


# Sub-experiments re-run with parallelism toggled inside verify.
def _repro_configs(seed: int):
    return [
        make_config("tblas_conc", trials=200, base_seed=seed),
        make_config("rate_conc", trials=50, base_seed=seed),
        make_config("brute_sandwich", trials=100, base_seed=seed),
    ]


def criterion_12(seed: int, workers: int = 1) -> CriterionResult:
    """Repeat and parallelism-toggle check on three sub-experiments."""
    other = 2 if workers <= 1 else 1
    rows = []
    ok = True
    for cfg in _repro_configs(seed):
        first = run(cfg, workers).body()
        again = run(cfg, other).body()
        same = first == again
        ok &= same
        rows.append({"experiment": cfg.experiment, "identical": same})
    return CriterionResult(12, "reproducibility", ok, {"checks": rows})


CRITERIA: dict[int, Callable[..., CriterionResult]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10,
    11: criterion_11, 12: criterion_12,
}


def run_criterion(number: int, seed: int, workers: int = 1) -> CriterionResult:
    start = time.perf_counter()
    res = CRITERIA[number](seed, workers)
    res.elapsed = time.perf_counter() - start
    return res


def verify(seed: int = 42, workers: int = 1, only=None, echo: Callable[[str], None] | None = None
           ) -> VerifyReport:
    """Run the acceptance checks in order, optionally restricted to ``only``."""
    report = VerifyReport(seed)
    for number in sorted(only or CRITERIA):
        res = run_criterion(number, seed, workers)
        report.results.append(res)
        if echo is not None:
            echo(res.line())
    return report
