import numpy as np
import pytest

from cbsim.schemes import DesignProblem

from oracles import random_links

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def make_problem(rng):
    """Random design problem; channels have unit-variance entries scaled by ``scale``."""

    def make(B=3, nT=4, nR=2, P=1.0, sigma2=0.1, scale=1.0, **kw):
        nT = [nT] * B if np.isscalar(nT) else list(nT)
        nR = [nR] * B if np.isscalar(nR) else list(nR)
        G = random_links(rng, nR, nT)
        G = tuple(tuple(scale * g for g in row) for row in G)
        return DesignProblem(G, P, sigma2, **kw)

    return make


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
