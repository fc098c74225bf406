"""Centralised double-threshold activation (DTBLAS).

Phase 1 keeps links with ``g_ii > Delta``.  Phase 2 builds the conflict graph
on those links, with an edge when both cross gains of the pair are
``<= delta``, and activates a maximum clique of it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import optimizer
from .clique import DEFAULT_EXACT_CAP, Graph, max_clique_exact, max_clique_greedy
from .errors import InvalidArgument, SizeCapError
from .model import ActivationSet, NetworkInstance, annotate
from .random_graph import clique_window_fixed_p
from .tblas import select_above

# Largest candidate set for which the conflict graph is built as a dense matrix.
MATERIALIZE_LIMIT = 3000


@dataclass(frozen=True)
class DtblasParams:
    Delta: float
    delta: float

    def __post_init__(self):
        if not self.delta > 0:
            raise InvalidArgument(f"delta must be positive, got {self.delta}")

    @classmethod
    def from_alpha_prime(cls, n: int, alpha_prime: float, delta: float) -> "DtblasParams":
        """``Delta = (1 - alpha') log n``."""
        return cls((1.0 - alpha_prime) * math.log(n), delta)

    @classmethod
    def optimal(cls, n: int, lam: float) -> "DtblasParams":
        pt = optimizer.optimal_point(lam)
        return cls.from_alpha_prime(n, pt.alpha_prime_star, pt.delta_star)

    @property
    def p(self) -> float:
        return math.expm1(-self.delta) ** 2

    @property
    def b(self) -> float:
        return 1.0 / self.p

    @property
    def mu_hat(self) -> float:
        return optimizer.mu_hat(self.delta)

    @property
    def sigma_hat_sq(self) -> float:
        return optimizer.sigma_hat_sq(self.delta)


@dataclass(frozen=True, eq=False)
class DtblasResult:
    """Outcome of both phases.  ``phase1`` is annotated on first access, since
    the phase-1 set can be far too large for its interference to be evaluated."""

    phase1_links: np.ndarray
    active: ActivationSet
    exact: bool
    params: DtblasParams
    inst: NetworkInstance

    @cached_property
    def phase1(self) -> ActivationSet:
        return annotate(self.inst, self.phase1_links)

    @property
    def clique_certificate(self) -> str:
        return "exact" if self.exact else "greedy-lower-bound"

    @property
    def k1(self) -> int:
        return int(self.phase1_links.size)

    @property
    def k2(self) -> int:
        return self.active.size


def phase1_select(inst: NetworkInstance, Delta: float) -> ActivationSet:
    return annotate(inst, select_above(inst, Delta))


def build_conflict_graph(inst: NetworkInstance, candidates, delta: float) -> Graph:
    """Edge ``{i, j}`` iff ``g_ij <= delta`` and ``g_ji <= delta``."""
    cand = np.unique(np.asarray(candidates, dtype=np.int64))
    if cand.size > MATERIALIZE_LIMIT:
        raise SizeCapError(
            f"{cand.size} candidates exceed MATERIALIZE_LIMIT={MATERIALIZE_LIMIT}"
        )
    block = inst.gain_block(cand, cand)
    small = block <= delta
    return Graph(cand, small & small.T)


def _peel_then_exact(inst, cand, delta, restarts, seed) -> list[int]:
    # Peel random vertices until the common neighbourhood fits in a dense
    # conflict graph, then solve that residual exactly; best over restarts.
    rng = np.random.default_rng(seed)
    best: list[int] = []
    for r in range(restarts):
        rest = cand
        chosen: list[int] = []
        while rest.size > MATERIALIZE_LIMIT:
            v = int(rest[rng.integers(rest.size)])
            chosen.append(v)
            rest = rest[rest != v]
            fwd, back = inst.cross_pairs(np.full(rest.size, v), rest)
            rest = rest[(fwd <= delta) & (back <= delta)]
        tail = max_clique_exact(build_conflict_graph(inst, rest, delta), MATERIALIZE_LIMIT)
        clique = sorted(chosen + tail)
        if len(clique) > len(best) or (len(clique) == len(best) and clique < best):
            best = clique
    return best


def dtblas_select(
    inst: NetworkInstance,
    params: DtblasParams,
    mode: str = "exact",
    *,
    exact_cap: int = DEFAULT_EXACT_CAP,
    restarts: int = 8,
    seed: int = 0,
) -> DtblasResult:
    """Run both phases; ``mode`` picks the exact or the greedy clique solver.

    In greedy mode, phase-1 sets too large for a dense conflict graph are
    handled by peeling random vertices and solving the remaining common
    neighbourhood exactly.  Either way the greedy result is only a lower
    bound on the clique number.
    """
    cand = select_above(inst, params.Delta)
    if mode == "exact":
        if cand.size > exact_cap:
            raise SizeCapError(
                f"phase 1 kept {cand.size} links, above the exact cap {exact_cap}; "
                "use mode='greedy'"
            )
        clique = max_clique_exact(build_conflict_graph(inst, cand, params.delta), exact_cap)
    elif mode == "greedy":
        if cand.size <= MATERIALIZE_LIMIT:
            graph = build_conflict_graph(inst, cand, params.delta)
            clique = max_clique_greedy(graph, restarts, seed)
        else:
            clique = _peel_then_exact(inst, cand, params.delta, restarts, seed)
    else:
        raise InvalidArgument(f"mode must be 'exact' or 'greedy', got {mode!r}")
    return DtblasResult(cand, annotate(inst, clique), mode == "exact", params, inst)


def predicted_k2_window(
    n: int, Delta: float, delta: float, epsilon: float, reading: str = "nested"
) -> tuple[int, int]:
    """Active-link window: the fixed-p clique window at ``m = n e^-Delta``, ``p = (1 - e^-delta)^2``."""
    params = DtblasParams(Delta, delta)
    if params.b < 1 + 1e-6:
        raise InvalidArgument(f"b = {params.b!r} is too close to 1; window diverges")
    m = n * math.exp(-Delta)
    if m < 3:
        raise InvalidArgument(f"n e^-Delta = {m:.6g} must be at least 3")
    w = clique_window_fixed_p(m, params.p, epsilon, reading)
    return w.lower, w.upper


def dtblas_throughput_lower_bound(k2: int, Delta: float, mu_hat: float) -> float:
    """``k2 log(1 + Delta / (mu_hat k2))``; the additive ``o(1)`` per link is dropped."""
    if k2 < 1:
        raise InvalidArgument("k2 must be >= 1")
    return k2 * math.log1p(Delta / (mu_hat * k2))
