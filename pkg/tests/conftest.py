import numpy as np
import pytest
from hypothesis import strategies as st

from rsvd_rmatrix.lax import Couplings, PhasePoint
from rsvd_rmatrix.sampling import random_sample

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20241015)


@pytest.fixture
def samples(rng):
    """A few seeded (PhasePoint, Couplings) pairs for each n in 1..3."""
    return [random_sample(n, rng) for n in (1, 2, 3) for _ in range(4)]


@st.composite
def phase_points(draw, n=None, max_theta=2.0):
    n = draw(st.integers(1, 3)) if n is None else n
    offset = draw(st.floats(0.3, 1.5))
    gaps = draw(st.lists(st.floats(0.2, 2.0), min_size=n - 1, max_size=n - 1))
    lam = np.cumsum([offset] + gaps)[::-1]
    theta = draw(st.lists(st.floats(-max_theta, max_theta), min_size=n, max_size=n))
    return PhasePoint(lam, theta)


@st.composite
def couplings(draw, kappa=None):
    mu = draw(st.floats(-2.0, -0.3))
    nu = draw(st.floats(0.3, 2.0))
    k = draw(st.floats(0.0, 2.0)) if kappa is None else kappa
    return Couplings(mu, nu, k)
