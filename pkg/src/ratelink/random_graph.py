"""G(m, p) sampling and clique-number concentration windows.

Two windows are provided.  For fixed ``p`` the clique number sits in

    floor(2 log_b m - 2 log_b log_b m(1-p) + 2 log_b(e/2) + 1 -/+ eps/p),   b = 1/p,

where the middle term is read as ``log_b(log_b(m (1-p)))`` by default
(``reading="nested"``); ``reading="product"`` gives ``log_b((log_b m)(1-p))``.
For vanishing ``p`` (second-moment method) the window is ``[floor(s), floor(s)+1]``
with ``s = 2 log_b m - 2 log_b log_b m + 1 - 4 log_b 2 - eps/log b``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np
from scipy.special import gammaln

from .clique import Graph
from .errors import InvalidArgument, SizeCapError
from .rng import uniforms

# Stream tag for graph sampling, distinct from network gain streams.
GNP_STREAM = 0x676E70
ENUMERATION_BUDGET = 10**7


@dataclass(frozen=True)
class GnpSpec:
    m: int
    p: float
    seed: int = 0

    def __post_init__(self):
        if self.m < 1:
            raise InvalidArgument(f"m must be >= 1, got {self.m}")
        if not 0 < self.p < 1:
            raise InvalidArgument(f"p must lie in (0, 1), got {self.p}")


@dataclass(frozen=True)
class CliqueWindow:
    lower: int
    upper: int
    regime: str  # "fixed_p" | "vanishing_p"
    epsilon: float
    center: float

    def __contains__(self, k: int) -> bool:
        return self.lower <= k <= self.upper


def gen_gnp(spec: GnpSpec) -> Graph:
    """Each unordered pair is an edge independently with probability ``p``."""
    m = spec.m
    i, j = np.triu_indices(m, 1)
    u = uniforms(spec.seed, GNP_STREAM, i, j)
    adj = np.zeros((m, m), dtype=bool)
    hit = u < spec.p
    adj[i[hit], j[hit]] = True
    adj |= adj.T
    return Graph(np.arange(m), adj)


def _log_b(x: float, log_base: float) -> float:
    return math.log(x) / log_base


def _fixed_p_center(m: float, p: float, reading: str) -> float:
    lb = -math.log(p)
    if reading == "product":
        inner = _log_b(m, lb) * (1 - p)
    elif reading == "nested":
        inner = _log_b(m * (1 - p), lb)
    else:
        raise InvalidArgument(f"reading must be 'nested' or 'product', got {reading!r}")
    if not inner > 0:
        raise InvalidArgument(f"inner log argument is {inner:.6g}; m={m} too small for p={p}")
    return 2 * _log_b(m, lb) - 2 * _log_b(inner, lb) + 2 * _log_b(math.e / 2, lb) + 1


def clique_window_fixed_p(m: float, p: float, epsilon: float, reading: str = "nested") -> CliqueWindow:
    """Window ``[s_1, s_2]`` for the clique number of G(m, p) at fixed ``p``."""
    if not 0 < p < 1:
        raise InvalidArgument(f"p must lie in (0, 1), got {p}")
    if m < 3:
        raise InvalidArgument(f"m must be >= 3, got {m}")
    if not epsilon > 0:
        raise InvalidArgument("epsilon must be positive")
    c = _fixed_p_center(m, p, reading)
    return CliqueWindow(
        math.floor(c - epsilon / p), math.floor(c + epsilon / p), "fixed_p", epsilon, c
    )


def vanishing_p_s(m: float, p: float, epsilon: float) -> float:
    lb = -math.log(p)
    logb_m = _log_b(m, lb)
    if not logb_m > 1:
        raise InvalidArgument(f"log_b m = {logb_m:.6g} must exceed 1")
    return 2 * logb_m - 2 * _log_b(logb_m, lb) + 1 - 4 * _log_b(2, lb) - epsilon / lb


def clique_window_vanishing_p(m: float, p: float, epsilon: float) -> CliqueWindow:
    """Two-point window ``[floor(s), floor(s) + 1]`` for small ``p``."""
    if not 0 < p < 1:
        raise InvalidArgument(f"p must lie in (0, 1), got {p}")
    if epsilon < 0:
        raise InvalidArgument("epsilon must be non-negative")
    if p > 0.2:
        warnings.warn(f"p={p} is not small; the vanishing-p window may not apply", stacklevel=2)
    if math.log(p) / math.log(m) < -0.25:
        warnings.warn(
            f"p={p} decays fast relative to m={m}; p should be m^-o(1)", stacklevel=2
        )
    s = vanishing_p_s(m, p, epsilon)
    return CliqueWindow(math.floor(s), math.floor(s) + 1, "vanishing_p", epsilon, s)


def log_binom(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    with np.errstate(invalid="ignore"):
        out = gammaln(a + 1) - gammaln(b + 1) - gammaln(a - b + 1)
    return np.where((b < 0) | (b > a), -np.inf, out)


def expected_clique_count(m: int, p: float, s: int) -> float:
    """``C(m, s) p^C(s, 2)``, the mean number of s-cliques."""
    if not 0 <= s <= m:
        raise InvalidArgument(f"need 0 <= s <= m, got s={s}, m={m}")
    return float(np.exp(log_binom(m, s) + s * (s - 1) / 2 * math.log(p)))


def variance_ratio(m: int, p: float, s: int) -> float:
    """``Var(Y_s) / E(Y_s)^2`` by the exact hypergeometric sum over overlaps ``l``."""
    if s < 2 or s > m:
        raise InvalidArgument(f"need 2 <= s <= m, got s={s}, m={m}")
    ell = np.arange(2, s + 1)
    log_w = log_binom(s, ell) + log_binom(m - s, s - ell) - log_binom(m, s)
    pairs = ell * (ell - 1) / 2
    # b^pairs - 1 = expm1(pairs * log b)
    terms = np.exp(log_w) * np.expm1(pairs * -math.log(p))
    return float(np.sum(np.where(np.isfinite(log_w), terms, 0.0)))


def overlap_exponent(ell, s: int, m: int, p: float):
    """``g(l) = s log 2 + l (log s - log m + (l - 1)/2 log b)``, convex in ``l``."""
    ell = np.asarray(ell, dtype=np.float64)
    lb = -math.log(p)
    return s * math.log(2) + ell * (math.log(s) - math.log(m) + (ell - 1) / 2 * lb)


@lru_cache(maxsize=32)
def _subsets(m: int, s: int) -> np.ndarray:
    return np.array(list(combinations(range(m), s)), dtype=np.int64).reshape(-1, s)


def count_cliques_exhaustive(graph: Graph, s: int, budget: int = ENUMERATION_BUDGET) -> int:
    """Number of s-vertex complete subgraphs, by checking every s-subset."""
    m = graph.m
    if s < 0:
        raise InvalidArgument("s must be non-negative")
    if s > m:
        return 0
    if math.comb(m, s) > budget:
        raise SizeCapError(f"C({m}, {s}) = {math.comb(m, s)} subsets exceed the budget {budget}")
    if s <= 1:
        return math.comb(m, s)
    sub = _subsets(m, s)
    ok = np.ones(sub.shape[0], dtype=bool)
    adj = graph.adjacency
    for a, b in combinations(range(s), 2):
        ok &= adj[sub[:, a], sub[:, b]]
    return int(ok.sum())
