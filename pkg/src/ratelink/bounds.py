"""Upper bounds on the rate-constrained optimum and an exhaustive oracle."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import InvalidArgument, SizeCapError
from .model import ActivationSet, NetworkInstance, RateConstraint, annotate

BRUTE_FORCE_MAX_N = 16


def sinr_ccdf_random_set(x: float, k: int, rho: float) -> float:
    """``P(gamma_i > x) = e^{-x/rho} / (1 + x)^(k-1)`` for a k-link set chosen independently of the gains."""
    if x < 0 or k < 1:
        raise InvalidArgument("need x >= 0 and k >= 1")
    noise = 0.0 if math.isinf(rho) else x / rho
    return math.exp(-noise - (k - 1) * math.log1p(x))


def kappa_upper(lam: float) -> float:
    if not lam > 0:
        raise InvalidArgument(f"lambda must be positive, got {lam}")
    return 1.0 / lam


def T_upper(n: int, lam: float, c: float = 0.0) -> float:
    """``log n - log log n + c``.  The constant ``c`` exists but is not known."""
    if n < 16:
        raise InvalidArgument(f"need n >= 16, got {n}")
    kappa_upper(lam)
    return math.log(n) - math.log(math.log(n)) + c


@dataclass(frozen=True)
class UpperBoundReport:
    n: int
    lam: float
    kappa_upper: float
    T_upper: float
    c: float


def upper_bound_report(n: int, lam: float, c: float = 0.0) -> UpperBoundReport:
    return UpperBoundReport(n, lam, kappa_upper(lam), T_upper(n, lam, c), c)


def _feasible_rows(sub_gains: np.ndarray, noise: float, gamma0: float) -> bool:
    direct = np.diag(sub_gains)
    interference = sub_gains.sum(axis=1) - direct
    return bool(np.all(direct >= gamma0 * (noise + interference)))


def brute_force_optimum(inst: NetworkInstance, constraint: RateConstraint) -> ActivationSet:
    """A largest set where every link reaches the demanded rate.

    Scans cardinalities downward; the first feasible set found at a size is
    the lexicographically smallest one.  Links that fail even alone are
    dropped up front, since dropping links never lowers anyone's SINR.
    """
    if inst.n > BRUTE_FORCE_MAX_N:
        raise SizeCapError(f"brute force supports n <= {BRUTE_FORCE_MAX_N}, got {inst.n}")
    gains = inst.gains
    noise = inst.noise
    # every test goes through the rate so the result agrees with check_feasibility
    solo = [i for i in range(inst.n)
            if annotate(inst, [i]).rates[0] >= constraint.lam]
    for k in range(len(solo), 0, -1):
        for combo in combinations(solo, k):
            idx = np.array(combo)
            sub = gains[np.ix_(idx, idx)]
            if not _feasible_rows(sub, noise, constraint.gamma0 * (1 - 1e-9)):
                continue
            aset = annotate(inst, idx)
            if np.all(aset.rates >= constraint.lam):
                return aset
    return annotate(inst, [])
