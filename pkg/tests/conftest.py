import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from causaloop import InducedFunction  # noqa: E402

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "causaloop" / "fixtures"
MALFORMED = Path(__file__).parent / "malformed"

ID, FLIP, C0, C1 = (0, 1), (1, 0), (0, 0), (1, 1)


def bit_omega(*components):
    """Tables over bits; components indexed by the encoded joint output."""
    n = len(components)
    return InducedFunction((2,) * n, (2,) * n, components)


@pytest.fixture
def identity():
    return bit_omega((0, 1))


@pytest.fixture
def constant0():
    return bit_omega((0, 0))


@pytest.fixture
def swap():
    # omega(o1, o2) = (o2, o1); o encoded as 2*o1 + o2
    return bit_omega((0, 1, 0, 1), (0, 0, 1, 1))


@pytest.fixture
def one_way():
    # omega(o1, o2) = (0, o1)
    return bit_omega((0, 0, 0, 0), (0, 0, 1, 1))


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def pytest_terminal_summary(terminalreporter):
    import acceptance_log

    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(acceptance_log.LINES):
            terminalreporter.write_line(acceptance_log.LINES[number])
