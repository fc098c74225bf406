import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "repo", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


@pytest.fixture
def three_link():
    """Receiver-major gains: row i holds the gains arriving at receiver i."""
    from ratelink.model import from_gains

    g = np.array([[3.0, 0.5, 0.3],
                  [0.4, 1.0, 0.7],
                  [0.2, 0.9, 2.0]])
    return from_gains(g, 5.0)


def rel_err(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


INF = math.inf


def pytest_configure(config):
    config.acceptance_lines = []
    config.addinivalue_line("markers", "acceptance: end-to-end acceptance criteria")


@pytest.fixture(scope="session")
def acceptance_lines(request):
    return request.config.acceptance_lines


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
