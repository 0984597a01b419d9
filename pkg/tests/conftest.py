import pytest

from hdcrocket.encoding import make_phases
from hdcrocket.plan import fit_plan

from helpers import random_dataset


@pytest.fixture(scope="session")
def small_ds():
    return random_dataset()


@pytest.fixture(scope="session")
def small_plan(small_ds):
    return fit_plan(small_ds.series, seed=3)


@pytest.fixture(scope="session")
def phases():
    return make_phases(seed=11)


def pytest_terminal_summary(terminalreporter):
    import helpers

    if helpers.ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in helpers.ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
