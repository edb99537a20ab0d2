import pytest

from cuspiso.solver import solve_complete
from cuspiso.triangulation import census


@pytest.fixture(scope="session")
def fig8():
    return census("fig8")


@pytest.fixture(scope="session")
def napoleon():
    return census("napoleon")


@pytest.fixture(scope="session")
def fig8_complete(fig8):
    return solve_complete(fig8)


@pytest.fixture(scope="session")
def napoleon_complete(napoleon):
    return solve_complete(napoleon)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if not mod or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
    missing = [n for n in range(1, 11) if n not in mod.RESULTS]
    for n in missing:
        terminalreporter.write_line(f"criterion {n:2d}: FAIL  (did not run to completion)")
