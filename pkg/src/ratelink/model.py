"""Network instances and the physical-layer formulas (SINR, rate, throughput).

Gains are stored receiver-major: ``gains[i, j]`` is the power gain from
transmitter ``j`` to receiver ``i`` (``g_ji`` in channel notation), so the
diagonal holds the direct coefficients.  Link indices are 0-based in the
Python API; file formats and the CLI use 1-based indices.

Rates are natural-log Shannon rates, i.e. dimensionless nats per channel use.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import EmptySetError, InvalidArgument, SizeCapError
from .rng import exponentials

# Largest n for which the full n x n gain matrix may be materialised.
FULL_MATRIX_LIMIT = 4096
# Instances up to this size keep their whole gain matrix after first use.
DENSE_CACHE_LIMIT = 64


@dataclass(frozen=True, eq=False)
class NetworkInstance:
    """One random network draw.

    Generated instances are lazy: any gain is recomputed on demand from
    ``(seed, stream_id, j, i)``, so ``n`` may be far larger than the number of
    gains that fit in memory.  Instances built from an explicit matrix
    (crafted tests, JSON imports) carry it in ``explicit_gains``.
    """

    n: int
    rho: float
    seed: int = 0
    stream_id: int = 0
    explicit_gains: np.ndarray | None = field(default=None, repr=False)

    @property
    def noise(self) -> float:
        """The ``1/rho`` term of the SINR denominator; exactly 0 for rho = inf."""
        return 0.0 if math.isinf(self.rho) else 1.0 / self.rho

    def gain_block(self, rx, tx) -> np.ndarray:
        """Matrix ``B[a, b] = g`` from transmitter ``tx[b]`` to receiver ``rx[a]``."""
        rx = np.asarray(rx, dtype=np.int64).reshape(-1)
        tx = np.asarray(tx, dtype=np.int64).reshape(-1)
        if self.explicit_gains is not None:
            return self.explicit_gains[np.ix_(rx, tx)].astype(np.float64, copy=True)
        if self.n <= DENSE_CACHE_LIMIT:
            return self._dense[np.ix_(rx, tx)]
        return exponentials(self.seed, self.stream_id, tx[None, :], rx[:, None])

    @cached_property
    def _dense(self) -> np.ndarray:
        # small instances are queried many times over; generate them once
        idx = np.arange(self.n, dtype=np.int64)
        g = exponentials(self.seed, self.stream_id, idx[None, :], idx[:, None])
        g.setflags(write=False)
        return g

    def cross_pairs(self, i, j) -> tuple[np.ndarray, np.ndarray]:
        """Both directions of the pairs ``(i[k], j[k])``: ``(g_{i->j}, g_{j->i})``."""
        i = np.asarray(i, dtype=np.int64)
        j = np.asarray(j, dtype=np.int64)
        if self.explicit_gains is not None:
            return self.explicit_gains[j, i], self.explicit_gains[i, j]
        fwd = exponentials(self.seed, self.stream_id, i, j)
        back = exponentials(self.seed, self.stream_id, j, i)
        return fwd, back

    @cached_property
    def direct(self) -> np.ndarray:
        """Direct coefficients ``g_ii`` for all links."""
        if self.explicit_gains is not None:
            return np.diag(self.explicit_gains).astype(np.float64)
        idx = np.arange(self.n, dtype=np.int64)
        return exponentials(self.seed, self.stream_id, idx, idx)

    @property
    def gains(self) -> np.ndarray:
        if self.explicit_gains is not None:
            return self.explicit_gains
        if self.n > FULL_MATRIX_LIMIT:
            raise SizeCapError(
                f"n={self.n} exceeds FULL_MATRIX_LIMIT={FULL_MATRIX_LIMIT}; "
                "use gain_block() on the links of interest"
            )
        idx = np.arange(self.n)
        return self.gain_block(idx, idx)

    def with_rho(self, rho: float) -> "NetworkInstance":
        _check_rho(rho)
        out = replace(self, rho=float(rho))
        return out

    def to_dict(self, include_gains: bool = True) -> dict:
        doc = {
            "n": self.n,
            "rho": "inf" if math.isinf(self.rho) else self.rho,
            "seed": self.seed,
            "stream_id": self.stream_id,
        }
        if include_gains:
            doc["gains"] = self.gains.tolist()
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "NetworkInstance":
        rho = doc["rho"]
        rho = math.inf if rho in ("inf", "Infinity") else float(rho)
        gains = doc.get("gains")
        if gains is None:
            return generate_network(
                int(doc["n"]), rho, int(doc.get("seed", 0)), int(doc.get("stream_id", 0))
            )
        inst = from_gains(np.asarray(gains, dtype=np.float64), rho)
        if inst.n != int(doc["n"]):
            raise InvalidArgument(f"gains are {inst.n}x{inst.n} but n={doc['n']}")
        return replace(
            inst, seed=int(doc.get("seed", 0)), stream_id=int(doc.get("stream_id", 0))
        )


def _check_rho(rho: float) -> None:
    if not rho > 0:
        raise InvalidArgument(f"rho must be positive (or inf), got {rho}")


def generate_network(n: int, rho: float, seed: int = 0, stream_id: int = 0) -> NetworkInstance:
    """A Rayleigh-fading network: i.i.d. Exp(1) gains from a counter-based stream."""
    if n < 1:
        raise InvalidArgument(f"n must be >= 1, got {n}")
    _check_rho(rho)
    return NetworkInstance(n=int(n), rho=float(rho), seed=int(seed), stream_id=int(stream_id))


def from_gains(gains, rho: float) -> NetworkInstance:
    """Wrap an explicit receiver-major gain matrix (``gains[i, j] = g_ji``)."""
    gains = np.array(gains, dtype=np.float64)
    if gains.ndim != 2 or gains.shape[0] != gains.shape[1] or gains.shape[0] == 0:
        raise InvalidArgument(f"gains must be a non-empty square matrix, got {gains.shape}")
    if not (np.all(np.isfinite(gains)) and np.all(gains > 0)):
        raise InvalidArgument("gains must be strictly positive and finite")
    _check_rho(rho)
    gains.setflags(write=False)
    return NetworkInstance(n=gains.shape[0], rho=float(rho), explicit_gains=gains)


def save_instance(inst: NetworkInstance, path: str | Path, include_gains: bool = True) -> None:
    Path(path).write_text(json.dumps(inst.to_dict(include_gains)))


def load_instance(path: str | Path) -> NetworkInstance:
    return NetworkInstance.from_dict(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class RateConstraint:
    """Demanded rate ``lam`` (nats) and the matching SINR ``gamma0 = e^lam - 1``."""

    lam: float
    gamma0: float

    @classmethod
    def from_lambda(cls, lam: float) -> "RateConstraint":
        if not lam > 0:
            raise InvalidArgument(f"lambda must be positive, got {lam}")
        return cls(float(lam), math.expm1(lam))

    @classmethod
    def from_gamma0(cls, gamma0: float) -> "RateConstraint":
        if not gamma0 > 0:
            raise InvalidArgument(f"gamma0 must be positive, got {gamma0}")
        return cls(math.log1p(gamma0), float(gamma0))


@dataclass(frozen=True, eq=False)
class ActivationSet:
    """Sorted active links with per-link SINR, rate and interference arrays."""

    links: np.ndarray
    sinr: np.ndarray
    rates: np.ndarray
    interference: np.ndarray

    @property
    def size(self) -> int:
        return int(self.links.size)

    def __len__(self) -> int:
        return self.size

    @property
    def throughput(self) -> float:
        return float(self.rates.sum())

    @property
    def average_rate(self) -> float:
        if self.size == 0:
            raise EmptySetError("average rate of an empty activation set")
        return self.throughput / self.size

    def to_dict(self) -> dict:
        """1-based, JSON-ready view."""
        return {
            "links": [int(i) + 1 for i in self.links],
            "sinr": self.sinr.tolist(),
            "rates": self.rates.tolist(),
            "interference": self.interference.tolist(),
        }


def _links(inst: NetworkInstance, active: Iterable[int]) -> np.ndarray:
    links = np.unique(np.asarray(list(active) if not isinstance(active, np.ndarray) else active,
                                 dtype=np.int64))
    if links.size and (links[0] < 0 or links[-1] >= inst.n):
        raise InvalidArgument(f"link indices must lie in [0, {inst.n})")
    return links


def annotate(inst: NetworkInstance, active: Iterable[int]) -> ActivationSet:
    """Evaluate SINR, rate and interference of every link in ``active``."""
    links = _links(inst, active)
    block = inst.gain_block(links, links)
    direct = np.diag(block).copy()
    np.fill_diagonal(block, 0.0)
    interference = block.sum(axis=1)
    # a lone link without noise has unbounded SINR
    with np.errstate(divide="ignore"):
        sinr_ = direct / (inst.noise + interference)
    return ActivationSet(links, sinr_, np.log1p(sinr_), interference)


def sinr(inst: NetworkInstance, active: Iterable[int], i: int) -> float:
    """``g_ii / (1/rho + sum_{j in active, j != i} g_ji)``."""
    links = _links(inst, active)
    if i not in links:
        raise InvalidArgument(f"link {i} is not in the active set")
    row = inst.gain_block([i], links)[0]
    own = links == i
    signal = float(row[own][0])
    row[own] = 0.0
    denom = inst.noise + float(row.sum())
    return signal / denom if denom > 0 else math.inf


def rate(inst: NetworkInstance, active: Iterable[int], i: int) -> float:
    return math.log1p(sinr(inst, active, i))


def throughput(inst: NetworkInstance, active: Iterable[int]) -> float:
    return annotate(inst, active).throughput


def average_rate(inst: NetworkInstance, active: Iterable[int]) -> float:
    return annotate(inst, active).average_rate


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    slack: dict[int, float]  # link -> r_i - lambda

    def __bool__(self) -> bool:
        return self.feasible


def check_feasibility(
    inst: NetworkInstance, active: Iterable[int] | ActivationSet, constraint: RateConstraint
) -> FeasibilityReport:
    """Whether every active link supports the demanded rate."""
    aset = active if isinstance(active, ActivationSet) else annotate(inst, active)
    slack = {int(i): float(r - constraint.lam) for i, r in zip(aset.links, aset.rates)}
    return FeasibilityReport(all(s >= 0 for s in slack.values()), slack)
