import numpy as np
import pytest
from hypothesis import settings

from synthlattice.model import Boundary, CouplingPattern, InteractionSpec, LatticeSpec

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")


def chain(pattern="uniform", g=1.0, g1=3.0, g2=1.0, U=0.0, R=0, cells=(0, 3), boundary="open", n_sites=None):
    if pattern == "uniform":
        pat = CouplingPattern.uniform(g)
    else:
        pat = CouplingPattern.alternating(g1, g2)
    return LatticeSpec(pat, InteractionSpec(U, R), cells[0], cells[1], Boundary(boundary), n_sites)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
