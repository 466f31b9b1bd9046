import pytest

from lambdadicke.model import ModelParams

# (criterion, passed, detail) lines collected by test_acceptance
CRITERIA_LINES = []


@pytest.fixture
def base():
    """Delta = omega1 = 1, delta = 0.75, omega2 = 0.25 (resonant photon 2)."""
    return ModelParams(delta=0.75, Delta=1.0, omega1=1.0, omega2=0.25)


@pytest.fixture
def degenerate():
    return ModelParams(delta=0.0, Delta=1.0, omega1=1.0, omega2=0.25)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n, ok, detail in sorted(CRITERIA_LINES, key=lambda t: t[0]):
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
