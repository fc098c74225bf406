"""Monte Carlo experiments, reports and acceptance checks."""

from .acceptance import CriterionResult, VerifyReport, verify
from .config import EXPERIMENTS, ExperimentConfig, load_config, make_config
from .report import ExperimentReport, emit, load_report
from .runner import run

__all__ = [
    "CriterionResult", "EXPERIMENTS", "ExperimentConfig", "ExperimentReport", "VerifyReport",
    "emit", "load_config", "load_report", "make_config", "run", "verify",
]
