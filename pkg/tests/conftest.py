import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default", max_examples=40, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

from fractions import Fraction  # noqa: E402

from fuchs.padic import FieldParams  # noqa: E402
from fuchs.repn import ThetaParam  # noqa: E402

# (p, n, m, N): the desk configuration and the two extra ones every suite must pass
CONFIGS = [(3, 1, 3, 2), (5, 1, 3, 2), (3, 2, 4, 3)]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def desk():
    return FieldParams(3, 1), ThetaParam(3, Fraction(1))


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
