import pytest

from tripleslit import ExperimentConfig

ACCEPTANCE_LINES = []


@pytest.fixture
def cfg():
    return ExperimentConfig()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
