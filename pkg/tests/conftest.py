import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import catalogs  # noqa: E402


@pytest.fixture(scope="session")
def lie_cat():
    return catalogs.lie_catalog()


@pytest.fixture(scope="session")
def postlie_cat():
    return catalogs.postlie_catalog()


@pytest.fixture(scope="session")
def order9_braces():
    return catalogs.order9_braces()


@pytest.fixture(scope="session")
def data_dir():
    return Path(__file__).parent.parent / "data"


def pytest_terminal_summary(terminalreporter):
    import acceptance_report

    if acceptance_report.LINES:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_report.LINES:
            terminalreporter.write_line(line)
