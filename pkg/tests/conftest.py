import os
import sys

# Validate every constructed MPFloat during the test run.
os.environ.setdefault("MPBRENT_DEBUG", "1")
sys.path.insert(0, os.path.dirname(__file__))

import pytest  # noqa: E402

from mpbrent import core  # noqa: E402


@pytest.fixture(autouse=True)
def _fresh_backend():
    with core.use_backend("auto"):
        yield


# Lines recorded by test_acceptance.py, one per criterion, echoed at the end
# of the run so they show up without -s.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
