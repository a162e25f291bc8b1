import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "numerics",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("numerics")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# acceptance criteria register one summary line each (see test_acceptance.py)
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[num])
