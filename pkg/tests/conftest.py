import numpy as np
import pytest

from hardylab import domains


@pytest.fixture(scope="session")
def square():
    return domains.unit_square()


@pytest.fixture(scope="session")
def interval():
    return domains.unit_interval()


def square_mode(grid, p=1, q=1):
    """Exact lattice eigenvector ``2 sin(p pi x) sin(q pi y)`` of the square."""
    x, y = grid.coords()
    return 2 * np.sin(p * np.pi * x) * np.sin(q * np.pi * y)


ACCEPTANCE = []


def record_acceptance(number, title, ok, detail):
    """Store and print one pass/fail line for an acceptance criterion."""
    line = f"ACCEPTANCE {number:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    ACCEPTANCE.append((number, line))
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
