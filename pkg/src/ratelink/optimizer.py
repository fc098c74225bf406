"""Optimal DTBLAS design for a demanded rate.

For a cross-gain threshold ``delta`` the truncated Exp(1) moments are

    mu_hat(delta)       = 1 - delta e^-delta / (1 - e^-delta)
    sigma_hat_sq(delta) = 1 - delta^2 e^-delta / (1 - e^-delta)^2

The best ``delta`` minimises ``gamma0 * mu_hat(delta) - log(1 - e^-delta)``;
its stationary point solves ``e^lam (1 - e^-delta - delta) + delta = 0``,
which has exactly one positive root (the left side is concave in ``delta``,
vanishes at 0 with unit slope and tends to -inf).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import InvalidArgument, NoConvergence

SERIES_CUTOFF = 1e-4
RESIDUAL_TOL = 1e-10


def _check_delta(delta: float) -> None:
    if not delta > 0:
        raise InvalidArgument(f"delta must be positive, got {delta}")


def log_edge_root(delta: float) -> float:
    """``log(1 - e^-delta)``, accurate for both tiny and huge ``delta``."""
    if delta > math.log(2):
        return math.log1p(-math.exp(-delta))
    return math.log(-math.expm1(-delta))


def mu_hat(delta: float) -> float:
    """Mean of an Exp(1) variable conditioned on being at most ``delta``."""
    _check_delta(delta)
    if delta < SERIES_CUTOFF:
        return delta / 2 - delta**2 / 12
    if delta > 1.0:
        # e^-delta form; expm1(delta) overflows past ~709
        return 1.0 - delta * math.exp(-delta) / -math.expm1(-delta)
    return 1.0 - delta / math.expm1(delta)


def sigma_hat_sq(delta: float) -> float:
    """Variance of an Exp(1) variable conditioned on being at most ``delta``."""
    _check_delta(delta)
    if delta < SERIES_CUTOFF:
        return delta**2 / 12
    if delta > 1.0:
        return 1.0 - delta**2 * math.exp(-delta) / math.expm1(-delta) ** 2
    em1 = math.expm1(delta)
    return 1.0 - delta**2 * (em1 + 1.0) / em1**2


def objective(delta: float, gamma0: float) -> float:
    return gamma0 * mu_hat(delta) - log_edge_root(delta)


def _one_minus_exp_minus(delta: float) -> float:
    # 1 - e^-delta - delta without cancellation for small delta
    if delta < 1e-2:
        terms, term, k = 0.0, delta, 1
        while True:
            k += 1
            term *= -delta / k
            terms += term
            if abs(term) < 1e-18 * abs(terms):
                return terms
    return -math.expm1(-delta) - delta


def stationarity_residual(delta: float, lam: float) -> float:
    """``e^lam (1 - e^-delta - delta) + delta``."""
    return math.exp(lam) * _one_minus_exp_minus(delta) + delta


def _seed(lam: float) -> float:
    return 2.0 * math.exp(-lam) if lam >= 2.0 else 1.0 / lam + 0.5


def solve_delta_star(lam: float, tol: float = 1e-14) -> float:
    """The positive root of the stationarity equation for demanded rate ``lam``.

    The bracket starts from the large- or small-rate expansion of the root
    and is widened geometrically until the residual changes sign; Brent's
    method then refines it.
    """
    if not lam > 0:
        raise InvalidArgument(f"lambda must be positive, got {lam}")
    if tol < 1e-14:
        raise InvalidArgument("tol must be >= 1e-14")
    x0 = _seed(lam)
    lo, hi = x0 / 1.5, x0 * 1.5
    for _ in range(200):
        if stationarity_residual(lo, lam) > 0:
            break
        lo /= 2.0
    else:
        raise NoConvergence(f"no positive residual below the seed {x0} for lambda={lam}")
    for _ in range(200):
        if stationarity_residual(hi, lam) < 0:
            break
        hi *= 2.0
    else:
        raise NoConvergence(f"no negative residual above the seed {x0} for lambda={lam}")
    root = brentq(stationarity_residual, lo, hi, args=(lam,), xtol=tol * min(lo, 1.0),
                  rtol=4 * np.finfo(float).eps, maxiter=500)
    return float(root)


def alpha_prime_from_delta(delta: float, gamma0: float) -> float:
    """``alpha' = -L / (gamma0 mu_hat - L)`` with ``L = log(1 - e^-delta)``."""
    _check_delta(delta)
    if not gamma0 > 0:
        raise InvalidArgument(f"gamma0 must be positive, got {gamma0}")
    neg_l = -log_edge_root(delta)
    return neg_l / (gamma0 * mu_hat(delta) + neg_l)


def scaling_factors(delta: float, alpha_prime: float) -> tuple[float, float, float]:
    """Limit ``(kappa, tau, rbar)`` of DTBLAS with ``Delta = (1 - alpha') log n``."""
    _check_delta(delta)
    if not 0 < alpha_prime < 1:
        raise InvalidArgument(f"alpha' must lie in (0, 1), got {alpha_prime}")
    neg_l = -log_edge_root(delta)
    kappa = alpha_prime / neg_l
    rbar = math.log1p((1 - alpha_prime) * neg_l / (alpha_prime * mu_hat(delta)))
    return kappa, kappa * rbar, rbar


@dataclass(frozen=True)
class OptimalOperatingPoint:
    lam: float
    gamma0: float
    delta_star: float
    alpha_prime_star: float
    kappa_star: float
    tau_star: float
    residual: float
    approximate: bool = False

    @property
    def rbar(self) -> float:
        return self.tau_star / self.kappa_star


def optimal_point(lam: float) -> OptimalOperatingPoint:
    gamma0 = math.expm1(lam)
    delta = solve_delta_star(lam)
    ap = alpha_prime_from_delta(delta, gamma0)
    kappa, tau, _ = scaling_factors(delta, ap)
    return OptimalOperatingPoint(lam, gamma0, delta, ap, kappa, tau,
                                 stationarity_residual(delta, lam))


def asymptotic_point(lam: float, regime: str) -> OptimalOperatingPoint:
    """Leading-order expansions of the optimum for ``lam -> inf`` or ``lam -> 0``."""
    if not lam > 0:
        raise InvalidArgument(f"lambda must be positive, got {lam}")
    if regime == "large":
        delta = 2.0 * math.exp(-lam)
        ap = 1.0 - 1.0 / lam
        tau = 1.0 - math.log(math.e / 2) / lam
        kappa = 1.0 / lam
    elif regime == "small":
        delta = 1.0 / lam + 0.5
        ap = math.exp(-delta) * delta
        tau = 1.0 - lam / 2
        kappa = 1.0 / lam - 0.5
    else:
        raise InvalidArgument(f"regime must be 'large' or 'small', got {regime!r}")
    return OptimalOperatingPoint(lam, math.expm1(lam), delta, ap, kappa, tau,
                                 stationarity_residual(delta, lam), approximate=True)


SWEEP_COLUMNS = (
    "lambda", "delta_star", "alpha_prime_star", "kappa_dtblas", "tau_dtblas",
    "kappa_tblas", "tau_tblas", "kappa_upper",
)


def sweep_operating_points(lambda_grid) -> list[dict[str, float]]:
    """Optimal DTBLAS design per rate, with TBLAS and upper-bound columns."""
    rows = []
    for lam in lambda_grid:
        lam = float(lam)
        if not lam > 0:
            raise InvalidArgument(f"grid values must be positive, got {lam}")
        pt = optimal_point(lam)
        rows.append({
            "lambda": lam,
            "delta_star": pt.delta_star,
            "alpha_prime_star": pt.alpha_prime_star,
            "kappa_dtblas": pt.kappa_star,
            "tau_dtblas": pt.tau_star,
            "kappa_tblas": 1.0 / math.expm1(lam),
            "tau_tblas": lam / math.expm1(lam),
            "kappa_upper": 1.0 / lam,
        })
    return rows
