import pytest
from hypothesis import HealthCheck, settings

from bicumulant.expr import Shape, Slot

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

# filled by test_acceptance.py, printed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def shape21():
    return Shape((2, 1))


@pytest.fixture
def abc():
    """a = a_1^1, b = a_2^1, c = a_1^2 on shape (2,1)."""
    return Slot(1, 1), Slot(1, 2), Slot(2, 1)
