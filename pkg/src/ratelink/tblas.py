"""Decentralised single-threshold activation (TBLAS) and its scaling laws."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument
from .model import ActivationSet, NetworkInstance, annotate


@dataclass(frozen=True)
class TblasParams:
    delta_threshold: float
    alpha: float
    n: int

    @classmethod
    def from_alpha(cls, n: int, alpha: float) -> "TblasParams":
        """Threshold ``log n - log log n - log alpha``, which puts ``alpha log n`` links above it."""
        return cls(threshold_for_alpha(n, alpha), float(alpha), int(n))


def threshold_for_alpha(n: int, alpha: float) -> float:
    if n < 3:
        raise InvalidArgument("log log n must be positive; need n >= 3")
    if not alpha > 0:
        raise InvalidArgument(f"alpha must be positive, got {alpha}")
    log_n = math.log(n)
    return log_n - math.log(log_n) - math.log(alpha)


def select_above(inst: NetworkInstance, threshold: float) -> np.ndarray:
    """Indices with ``g_ii > threshold`` (strict)."""
    return np.flatnonzero(inst.direct > threshold)


def tblas_select(inst: NetworkInstance, delta_threshold: float) -> ActivationSet:
    """Activate exactly the links whose direct gain exceeds the threshold."""
    return annotate(inst, select_above(inst, delta_threshold))


def count_window(n: int, alpha: float, width: float = 3.0) -> tuple[float, float]:
    """Centre ``alpha log n`` and half-width ``width * sqrt(alpha log n)`` for the active count.

    The count is Binomial(n, e^-Delta) with mean ``alpha log n``, so the half-width
    is ``width`` Poisson standard deviations.
    """
    threshold_for_alpha(n, alpha)
    centre = alpha * math.log(n)
    return centre, width * math.sqrt(centre)


def alpha_for_lambda(lam: float) -> float:
    """The ``alpha`` whose limiting per-link rate ``log(1 + 1/alpha)`` equals ``lam``."""
    if not lam > 0:
        raise InvalidArgument(f"lambda must be positive, got {lam}")
    return 1.0 / math.expm1(lam)


def predicted_scaling(alpha: float) -> tuple[float, float, float]:
    """Limit ``(kappa, tau, rbar)``: ``kappa = alpha``, ``rbar = log(1 + 1/alpha)``, ``tau = kappa * rbar``."""
    if not alpha > 0:
        raise InvalidArgument(f"alpha must be positive, got {alpha}")
    rbar = math.log1p(1.0 / alpha)
    return alpha, alpha * rbar, rbar


def rate_concentration_bound(n: int, alpha: float) -> float:
    """Half-width ``2 sqrt(log log n / (alpha^3 log n))`` of the per-link rate band.

    Callers apply their own slack multiplier in place of the ``1 + o(1)`` factor.
    """
    if n < 16:
        raise InvalidArgument(f"rate concentration bound needs n >= 16, got {n}")
    if not alpha > 0:
        raise InvalidArgument(f"alpha must be positive, got {alpha}")
    log_n = math.log(n)
    return 2.0 * math.sqrt(math.log(log_n) / (alpha**3 * log_n))
