"""DTBLAS tuned so that interference sits at a design level ``beta``.

With ``Delta0 = gamma0 (1/rho + beta)`` and a cross threshold ``delta`` that
makes the expected interference ``(k2 - 1) mu_hat`` equal ``beta``, each
active rate behaves like ``log(1 + g_ii / (1/rho + beta))`` and therefore
moves with the SNR.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .dtblas import DtblasParams, DtblasResult, dtblas_select
from .errors import EmptySetError, InvalidArgument, RegimeError
from .model import NetworkInstance, RateConstraint


def _log_terms(n: int) -> tuple[float, float]:
    if n < 16:
        raise InvalidArgument(f"need n >= 16, got {n}")
    log_n = math.log(n)
    return log_n, math.log(log_n)


def delta0_threshold(gamma0: float, rho: float, beta: float) -> float:
    """``gamma0 (1/rho + beta)``; guarantees rate ``log(1 + gamma0)`` while interference stays <= beta."""
    if not (gamma0 > 0 and rho > 0 and beta >= 0):
        raise InvalidArgument("gamma0 and rho must be positive, beta non-negative")
    noise = 0.0 if math.isinf(rho) else 1.0 / rho
    return gamma0 * (noise + beta)


@dataclass(frozen=True)
class DeltaSolution:
    delta: float
    leading: float  # 2 beta log log n / log n
    residual: float


def solve_delta_nl(n: int, beta: float) -> DeltaSolution:
    """Root of ``x / (-log x) = 2 beta / (log n - log log n)`` on ``(0, 1/e)``.

    ``x / (-log x)`` increases from 0 to ``1/e`` on that interval, so a root
    exists iff the target is below ``1/e``.
    """
    log_n, loglog_n = _log_terms(n)
    if not beta > 0:
        raise InvalidArgument(f"beta must be positive, got {beta}")
    if abs(math.log(beta)) > loglog_n:
        warnings.warn(f"|log beta| = {abs(math.log(beta)):.3g} exceeds log log n", stacklevel=2)
    target = 2 * beta / (log_n - loglog_n)
    if target >= math.exp(-1):
        raise RegimeError(f"beta={beta} too large for n={n}: no delta in (0, 1/e)")

    def f(x: float) -> float:
        return x / -math.log(x) - target

    hi = math.exp(-1)
    lo = min(target, hi) * 1e-3
    while f(lo) > 0:
        lo *= 1e-3
    root = brentq(f, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    return DeltaSolution(root, 2 * beta * loglog_n / log_n, f(root))


def predicted_active_nl(n: int) -> int:
    """``floor(log n / log log n)``."""
    log_n, loglog_n = _log_terms(n)
    return math.floor(log_n / loglog_n)


@dataclass(frozen=True)
class NoiseLimitedParams:
    beta: float
    rho: float
    lam: float
    gamma0: float
    Delta0: float
    delta: float
    predicted_k2: int
    n: int

    @classmethod
    def build(cls, n: int, beta: float, rho: float, gamma0: float) -> "NoiseLimitedParams":
        c = RateConstraint.from_gamma0(gamma0)
        return cls(
            beta=float(beta),
            rho=float(rho),
            lam=c.lam,
            gamma0=c.gamma0,
            Delta0=delta0_threshold(gamma0, rho, beta),
            delta=solve_delta_nl(n, beta).delta,
            predicted_k2=predicted_active_nl(n),
            n=int(n),
        )

    @property
    def dtblas(self) -> DtblasParams:
        return DtblasParams(self.Delta0, self.delta)


def nl_select(inst: NetworkInstance, params: NoiseLimitedParams, mode: str = "greedy",
              **kwargs) -> DtblasResult:
    """DTBLAS at ``(Delta0, delta_nl)``.  Phase 1 keeps a constant fraction of
    links here, so the default solver is the greedy one."""
    return dtblas_select(inst, params.dtblas, mode, **kwargs)


@dataclass(frozen=True)
class InterferenceDeviation:
    deviation: float  # max_i |I_i - beta|
    bound: float | None  # beta log log n / sqrt(log n), when n >= 16


def interference_deviation(result: DtblasResult, beta: float, n: int | None = None) -> InterferenceDeviation:
    active = result.active
    if active.size == 0:
        raise EmptySetError("interference deviation of an empty activation set")
    dev = float(np.max(np.abs(active.interference - beta)))
    bound = None
    if n is not None:
        log_n, loglog_n = _log_terms(n)
        bound = beta * loglog_n / math.sqrt(log_n)
    return InterferenceDeviation(dev, bound)


def nl_throughput_window(n: int, Delta0: float, rho: float, beta: float) -> tuple[float, float]:
    """``k2 log(1 + Delta0/(1/rho + beta))`` and ``k2 log(1 + (Delta0 + 1)/(1/rho + beta))``
    with ``k2 = floor(log n / log log n)``."""
    k2 = predicted_active_nl(n)
    denom = (0.0 if math.isinf(rho) else 1.0 / rho) + beta
    return k2 * math.log1p(Delta0 / denom), k2 * math.log1p((Delta0 + 1) / denom)
