import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from weakdecomp.complex import cycle, make_complex, simplex_boundary  # noqa: E402
from weakdecomp.delta import DeltaLabeling, delta_complex  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record_criterion():
    def record(number: int, passed: bool, detail: str) -> None:
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def d22():
    return delta_complex(2, 2)


@pytest.fixture(scope="session")
def lab22():
    return DeltaLabeling(2, 2)


@pytest.fixture
def c6():
    return cycle(6)


@pytest.fixture
def triangle():
    return make_complex([[0, 1, 2]], 3)


@pytest.fixture
def tetra_boundary():
    return simplex_boundary(4)
