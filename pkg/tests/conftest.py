import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from liftedmc import LiftedProblem  # noqa: E402


@pytest.fixture
def triangle():
    return LiftedProblem.from_edges(3, [(0, 1), (1, 2), (0, 2)], [2.0, 2.0, -1.0])


@pytest.fixture
def chain():
    """Chain 0-1-2 with attractive local edges and a strong repulsive lifted pair."""
    return LiftedProblem.from_edges(3, [(0, 1), (1, 2)], [10.0, 10.0], [(0, 2)], [-20.0])


@pytest.fixture
def path4():
    return LiftedProblem.from_edges(4, [(0, 1), (1, 2), (2, 3)], [1.0, 1.0, 1.0])


ACCEPTANCE = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[ACCEPTANCE] = {}


@pytest.fixture
def report(request):
    """Record one PASS/FAIL line for an acceptance criterion and print it."""
    def _report(number, passed, detail):
        line = f"{'PASS' if passed else 'FAIL'} criterion {number}: {detail}"
        request.config.stash[ACCEPTANCE][number] = line
        print(line)
        return passed
    return _report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for number in sorted(lines):
            terminalreporter.write_line(lines[number])
