"""Experiment configuration: defaults, validation and JSON loading.

Trial ``t`` of an experiment uses seed ``base_seed + t``.  When ``n`` is a
grid, every grid point reuses the same trial seeds.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

from ..errors import ConfigError

EXPERIMENTS = (
    "tblas_conc", "dtblas_window", "rate_conc", "clique_window",
    "second_moment", "noise_limited", "sweep", "brute_sandwich",
)

# Default n (None when the experiment has no network size), trials, strategy
# parameters and slack multipliers.  Thresholds and slacks are calibration
# constants; they are echoed in every report.
DEFAULTS: dict[str, dict[str, Any]] = {
    "tblas_conc": dict(
        n=100_000, trials=200,
        params={"alpha": 1.0, "rho": math.inf},
        slack={"width": 3.0},
    ),
    "rate_conc": dict(
        n=1_000_000, trials=50,
        params={"alpha": 2.0, "rho": math.inf},
        slack={"rate": 1.5},
    ),
    "dtblas_window": dict(
        n=10_000, trials=20,
        params={"lam": 1.0, "Delta": None, "delta": None, "epsilon": 0.5,
                "rho": math.inf, "mode": "exact", "reading": "nested"},
        slack={"throughput": 0.25},
    ),
    "clique_window": dict(
        n=None, trials=50,
        params={"m": 200, "p": 0.5, "epsilon": 0.2, "regime": "fixed_p", "reading": "nested"},
        slack={"near": 1},
    ),
    "second_moment": dict(
        n=None, trials=2000,
        params={"m": 30, "p": 0.3, "s": [3, 4]},
        slack={"se": 3.0},
    ),
    "noise_limited": dict(
        n=1_000_000, trials=50,
        params={"beta": 1.0, "rho": 10.0, "gamma0": 1.0, "mode": "greedy", "restarts": 8},
        slack={"throughput": 0.25, "k2": 2},
    ),
    "sweep": dict(
        n=None, trials=1,
        params={"lambda_min": 0.05, "lambda_max": 20.0, "points": 100, "spacing": "linear"},
        slack={},
    ),
    "brute_sandwich": dict(
        n=12, trials=100,
        params={"lam": math.log(2), "rho": 10.0},
        slack={"order": 1},
    ),
}

_CHOICES = {
    "mode": ("exact", "greedy"),
    "reading": ("nested", "product"),
    "regime": ("fixed_p", "vanishing_p"),
    "spacing": ("linear", "log"),
}
_POSITIVE = {"alpha", "rho", "lam", "epsilon", "beta", "gamma0", "lambda_min", "lambda_max",
             "Delta", "delta"}
_INTEGER = {"m", "restarts", "points"}


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    n: int | tuple[int, ...] | None = None
    trials: int = 1
    base_seed: int = 0
    params: dict[str, Any] = field(default_factory=dict)
    slack: dict[str, float] = field(default_factory=dict)
    out: str | None = None

    @property
    def n_grid(self) -> tuple[int | None, ...]:
        if isinstance(self.n, tuple):
            return self.n
        return (self.n,)

    def seed_for(self, trial: int) -> int:
        return self.base_seed + trial

    def with_overrides(self, **kw) -> "ExperimentConfig":
        current = self.to_dict()
        del current["experiment"]
        return make_config(self.experiment, **{**current, **kw})

    def to_dict(self) -> dict[str, Any]:
        return {
            "experiment": self.experiment,
            "n": list(self.n) if isinstance(self.n, tuple) else self.n,
            "trials": self.trials,
            "base_seed": self.base_seed,
            "params": dict(self.params),
            "slack": dict(self.slack),
            "out": self.out,
        }


def _as_number(path: str, value: Any) -> float:
    if isinstance(value, str) and value.lower() in ("inf", "infinity"):
        return math.inf
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(path, f"expected a number, got {value!r}")
    return float(value)


def _check_param(experiment: str, key: str, value: Any) -> Any:
    path = f"params.{key}"
    if value is None:
        if key in ("Delta", "delta"):
            return None
        raise ConfigError(path, "must not be null")
    if key in _CHOICES:
        if value not in _CHOICES[key]:
            raise ConfigError(path, f"must be one of {_CHOICES[key]}, got {value!r}")
        return value
    if key == "s":
        values = value if isinstance(value, list) else [value]
        if not values or any(isinstance(v, bool) or not isinstance(v, int) or v < 0 for v in values):
            raise ConfigError(path, "must be a non-negative integer or a list of them")
        return sorted(set(values))
    if key in _INTEGER:
        if isinstance(value, bool) or not isinstance(value, int) or value < 1:
            raise ConfigError(path, f"must be a positive integer, got {value!r}")
        return value
    x = _as_number(path, value)
    if key == "p":
        if not 0 < x < 1:
            raise ConfigError(path, f"must lie in (0, 1), got {x}")
        return x
    if key in _POSITIVE and not x > 0:
        raise ConfigError(path, f"must be positive, got {x}")
    if math.isinf(x) and key != "rho":
        raise ConfigError(path, "must be finite")
    return x


def _check_n(value: Any) -> int | tuple[int, ...]:
    items = value if isinstance(value, (list, tuple)) else [value]
    if not items:
        raise ConfigError("n", "grid must not be empty")
    for v in items:
        if isinstance(v, bool) or not isinstance(v, int) or v < 1:
            raise ConfigError("n", f"must be a positive integer or a list of them, got {v!r}")
    return tuple(items) if isinstance(value, (list, tuple)) else int(value)


def make_config(experiment: str, **kw) -> ExperimentConfig:
    """Defaults for ``experiment`` overlaid with ``kw``, validated.

    Raises ``ConfigError`` naming the offending field path.
    """
    if experiment not in EXPERIMENTS:
        raise ConfigError("experiment", f"unknown experiment {experiment!r}; choose from {EXPERIMENTS}")
    base = DEFAULTS[experiment]
    unknown = set(kw) - {"experiment", "n", "trials", "base_seed", "params", "slack", "out"}
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown field")

    n = kw.get("n", base["n"])
    if base["n"] is None:
        if n is not None:
            raise ConfigError("n", f"{experiment} takes no network size")
    else:
        if n is None:
            raise ConfigError("n", "required")
        n = _check_n(n)

    trials = kw.get("trials", base["trials"])
    if isinstance(trials, bool) or not isinstance(trials, int) or trials < 1:
        raise ConfigError("trials", f"must be an integer >= 1, got {trials!r}")
    seed = kw.get("base_seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError("base_seed", f"must be a non-negative integer, got {seed!r}")

    params = dict(base["params"])
    for key, value in (kw.get("params") or {}).items():
        if key not in params:
            raise ConfigError(f"params.{key}", f"unknown parameter for {experiment}")
        params[key] = value
    params = {k: _check_param(experiment, k, v) for k, v in params.items()}

    slack = dict(base["slack"])
    for key, value in (kw.get("slack") or {}).items():
        if key not in slack:
            raise ConfigError(f"slack.{key}", f"unknown slack for {experiment}")
        x = _as_number(f"slack.{key}", value)
        if x < 0 or math.isinf(x):
            raise ConfigError(f"slack.{key}", f"must be finite and non-negative, got {x}")
        slack[key] = x

    if experiment == "dtblas_window" and (params["Delta"] is None) != (params["delta"] is None):
        raise ConfigError("params.Delta", "Delta and delta must be given together")
    if experiment == "sweep" and trials != 1:
        raise ConfigError("trials", "sweep is deterministic and runs exactly one trial")
    if experiment == "sweep" and params["lambda_max"] < params["lambda_min"]:
        raise ConfigError("params.lambda_max", "must be >= lambda_min")

    out = kw.get("out")
    if out is not None and not isinstance(out, str):
        raise ConfigError("out", "must be a path string")
    return ExperimentConfig(experiment, n, trials, seed, params, slack, out)


def load_config(path: str | Path, **overrides) -> ExperimentConfig:
    """Read a JSON config; keyword overrides win over file values."""
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config", "top level must be an object")
    if "experiment" not in data and "experiment" not in overrides:
        raise ConfigError("experiment", "required")
    merged = {**data}
    for key, value in overrides.items():
        if key in ("params", "slack"):
            merged[key] = {**(data.get(key) or {}), **value}
        else:
            merged[key] = value
    experiment = merged.pop("experiment")
    return make_config(experiment, **merged)


def replace_trials(cfg: ExperimentConfig, trials: int) -> ExperimentConfig:
    if trials < 1:
        raise ConfigError("trials", f"must be an integer >= 1, got {trials}")
    return replace(cfg, trials=trials)
