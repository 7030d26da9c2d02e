import pytest
from hypothesis import settings

from seqaccel.oligomer import average_energies, energy_differences, load_fixture

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")

# Acceptance tests append (number, title, passed, detail) here; the lines are
# printed in the terminal summary so that they survive output capturing.
ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def table1():
    return load_fixture("table1")


@pytest.fixture(scope="session")
def e_av(table1):
    return average_energies(table1)


@pytest.fixture(scope="session")
def e_dif(table1):
    return energy_differences(table1)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(ACCEPTANCE_LINES):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number:2d}: {title} ({detail})")
