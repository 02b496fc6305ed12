import pytest

from friable.dickman import default_table


@pytest.fixture(scope="session")
def table():
    return default_table()


def pytest_terminal_summary(terminalreporter):
    from tests import test_acceptance
    if test_acceptance.LINES:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.LINES:
            terminalreporter.write_line(line)
