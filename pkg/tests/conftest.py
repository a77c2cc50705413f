import pytest

from ofa_pbs.dist import make_exponential
from ofa_pbs.stochgame import StochasticGame


@pytest.fixture
def exp12():
    """Exp(1) vs Exp(2) with v_T = 1, the running example."""
    return StochasticGame(make_exponential(1.0), make_exponential(2.0), 1.0)


_ACCEPTANCE = []


@pytest.fixture
def acceptance_report():
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  criterion {name}: {detail}")
