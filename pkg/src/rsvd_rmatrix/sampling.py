"""Seeded random phase-space points and couplings in a well-conditioned box."""
import numpy as np

from .lax import Couplings, PhasePoint
from .tensor import swap

GAP_RANGE = (0.2, 2.0)
OFFSET_RANGE = (0.3, 1.5)
THETA_RANGE = (-2.0, 2.0)
MU_RANGE = (-2.0, -0.3)
NU_RANGE = (0.3, 2.0)
KAPPA_RANGE = (0.0, 2.0)
#: gentler rapidities for long integrations at a fixed RK4 step
SIMULATION_THETA_RANGE = (-0.5, 0.5)


def random_lambda(n, rng):
    """lambda_n in OFFSET_RANGE, then cumulative sums of gaps drawn from GAP_RANGE."""
    steps = np.concatenate([[rng.uniform(*OFFSET_RANGE)], rng.uniform(*GAP_RANGE, n - 1)])
    return np.cumsum(steps)[::-1].copy()


def random_point(n, rng, theta_range=THETA_RANGE):
    return PhasePoint(random_lambda(n, rng), rng.uniform(*theta_range, n))


def random_couplings(rng, kappa=None):
    mu = rng.uniform(*MU_RANGE)
    nu = rng.uniform(*NU_RANGE)
    kappa = rng.uniform(*KAPPA_RANGE) if kappa is None else kappa
    return Couplings(mu, nu, kappa)


def random_sample(n, rng, kappa=None):
    """(PhasePoint, Couplings); the point is drawn first."""
    p = random_point(n, rng)
    return p, random_couplings(rng, kappa)


def random_symmetric_tensor(N, rng):
    """A random complex N^2 x N^2 tensor with u21 = u12."""
    M = rng.normal(size=(N * N, N * N)) + 1j * rng.normal(size=(N * N, N * N))
    return M + swap(M)
