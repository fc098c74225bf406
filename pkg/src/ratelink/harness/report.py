"""Experiment reports and their CSV/JSON emission.

Floats are rounded to 12 significant digits when the report is built, so the
in-memory report, its JSON file and a re-parsed copy hold identical values.
NaN is written as ``null`` and infinities as the strings ``"inf"``/``"-inf"``.

CSV columns per experiment (``trial, seed, n`` first, then the columns below;
``second_moment`` has one ``Y_<s>`` column per configured ``s``; ``sweep``
uses the operating-point schema instead):

    tblas_conc      k1 expected_k half_width hit_count
    rate_conc       k1 min_rate max_rate mean_rate rbar max_rate_deviation bound hit_rate
    dtblas_window   k1 k2 min_rate max_rate mean_rate throughput throughput_bound
                    window_lower window_upper hit_window hit_throughput exact
    clique_window   clique_number window_lower window_upper center hit_window hit_near
    noise_limited   k1 k2 predicted_k2 min_rate max_rate mean_rate throughput
                    window_lower window_upper max_interference interference_deviation
                    deviation_bound qualifies rate_guarantee snr_monotone
                    hit_k2 hit_throughput hit_deviation
    brute_sandwich  k_tblas k_dtblas k_brute tblas_feasible dtblas_feasible
                    brute_feasible dtblas_certified both_feasible ordered
                    hit_certificate hit_oracle raw_dtblas_le_brute raw_tblas_le_dtblas
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from ..optimizer import SWEEP_COLUMNS

SIG_DIGITS = 12
LEADING_COLUMNS = ("trial", "seed", "n")

RECORD_COLUMNS: dict[str, tuple[str, ...]] = {
    "tblas_conc": ("k1", "expected_k", "half_width", "hit_count"),
    "rate_conc": ("k1", "min_rate", "max_rate", "mean_rate", "rbar", "max_rate_deviation",
                  "bound", "hit_rate"),
    "dtblas_window": ("k1", "k2", "min_rate", "max_rate", "mean_rate", "throughput",
                      "throughput_bound", "window_lower", "window_upper", "hit_window",
                      "hit_throughput", "exact"),
    "clique_window": ("clique_number", "window_lower", "window_upper", "center", "hit_window",
                      "hit_near"),
    "noise_limited": ("k1", "k2", "predicted_k2", "min_rate", "max_rate", "mean_rate",
                      "throughput", "window_lower", "window_upper", "max_interference",
                      "interference_deviation", "deviation_bound", "qualifies",
                      "rate_guarantee", "snr_monotone", "hit_k2", "hit_throughput",
                      "hit_deviation"),
    "brute_sandwich": ("k_tblas", "k_dtblas", "k_brute", "tblas_feasible", "dtblas_feasible",
                       "brute_feasible", "dtblas_certified", "both_feasible", "ordered",
                       "hit_certificate", "hit_oracle", "raw_dtblas_le_brute",
                       "raw_tblas_le_dtblas"),
}


def clean(value: Any) -> Any:
    """JSON-ready copy with floats rounded to ``SIG_DIGITS`` significant digits."""
    if isinstance(value, dict):
        return {str(k): clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [clean(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        x = float(value)
        if math.isnan(x):
            return None
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return float(f"{x:.{SIG_DIGITS}g}")
    return value


def columns_for(config: dict) -> tuple[str, ...]:
    exp = config["experiment"]
    if exp == "sweep":
        return SWEEP_COLUMNS
    if exp == "second_moment":
        return LEADING_COLUMNS + tuple(f"Y_{s}" for s in config["params"]["s"])
    return LEADING_COLUMNS + RECORD_COLUMNS[exp]


@dataclass
class ExperimentReport:
    config: dict
    records: list[dict]
    aggregates: dict
    wall_clock: float = 0.0
    extra: dict = field(default_factory=dict)

    def body(self) -> str:
        """Canonical JSON of everything except timing."""
        doc = {"config": self.config, "aggregates": self.aggregates, "records": self.records}
        return json.dumps(doc, indent=1, allow_nan=False)

    def to_dict(self) -> dict:
        return {"config": self.config, "aggregates": self.aggregates,
                "records": self.records, "wall_clock": self.wall_clock}


def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return f"{value:.{SIG_DIGITS}g}"
    return str(value)


def emit(report: ExperimentReport, fmt: str, path: str | Path | None = None) -> str:
    """Render as ``csv`` (per-trial rows) or ``json`` (whole report), optionally writing a file.

    Raises ``OSError`` when the path cannot be written.
    """
    if fmt == "json":
        text = json.dumps(report.to_dict(), indent=1, allow_nan=False) + "\n"
    elif fmt == "csv":
        cols = columns_for(report.config)
        lines = [",".join(cols)]
        for rec in report.records:
            lines.append(",".join(_csv_cell(rec.get(c)) for c in cols))
        text = "\n".join(lines) + "\n"
    else:
        raise ValueError(f"format must be 'csv' or 'json', got {fmt!r}")
    if path is not None:
        Path(path).write_text(text)
    return text


def load_report(path: str | Path) -> ExperimentReport:
    doc = json.loads(Path(path).read_text())
    return ExperimentReport(doc["config"], doc["records"], doc["aggregates"],
                            doc.get("wall_clock", 0.0))


def read_csv(path: str | Path) -> tuple[list[str], list[dict[str, str]]]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        return list(reader.fieldnames or []), list(reader)
