import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

import report

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def pmfs(M, min_mass=0.0):
    """Strategy for probability vectors of length ``M``."""
    return (
        st.lists(st.floats(min_mass, 1.0, allow_nan=False), min_size=M, max_size=M)
        .filter(lambda v: sum(v) > 1e-3)
        .map(lambda v: np.asarray(v) / np.sum(v))
    )


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not report.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(report.LINES, key=report.sort_key):
        terminalreporter.write_line(line)
