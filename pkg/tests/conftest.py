import sys
from pathlib import Path

import pytest

from scatterlab.ff_tower import build_field

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture(scope="session")
def f81():
    """F_81 over F_3 with intermediate F_9."""
    return build_field(3, 1, 4, 2)


@pytest.fixture(scope="session")
def f64():
    """F_64 over F_2 with intermediate F_8."""
    return build_field(2, 1, 6, 3)


@pytest.fixture(scope="session")
def f16():
    """F_16 over F_2 with intermediate F_4."""
    return build_field(2, 1, 4, 2)


@pytest.fixture(scope="session")
def f81_q9():
    """F_81 seen as a quadratic extension of F_9."""
    return build_field(3, 2, 2)


@pytest.fixture(scope="session")
def f729():
    return build_field(3, 1, 6, 3)


ACCEPTANCE_LINES = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(request):
    return request.config.stash.setdefault(ACCEPTANCE_LINES, [])


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
