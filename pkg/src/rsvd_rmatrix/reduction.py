"""Reduction data: the sphere S, the orbit map xi, the map Upsilon and the momentum map.

Upsilon sends a reduced phase-space point (lambda, theta) together with two
elements eta_L, eta_R of K = U(N) intersected with U(n, n) to a point of the
extended phase space; the momentum map vanishes on its image.
"""
from dataclasses import dataclass

import numpy as np
from scipy.stats import unitary_group

from .algebra import algebra_residual, build_C, cartan_split, group_residual, lambda_matrix
from .errors import MembershipError, SphereError
from .lax import V_vector, lax_A, sqrt_lax_A

#: absolute tolerance for the sphere and K invariants
SPHERE_TOL = 1e-9
K_TOL = 1e-9


@dataclass(frozen=True)
class SpherePoint:
    """V in C^N with C V + V = 0 and V* V = N."""

    V: np.ndarray

    def __post_init__(self):
        V = np.array(self.V, dtype=complex).reshape(-1)
        if V.size % 2:
            raise SphereError(f"vector length {V.size} is odd")
        lin, norm = sphere_residuals(V)
        if lin >= SPHERE_TOL or norm >= SPHERE_TOL:
            raise SphereError(f"vector is off the sphere: |CV + V| = {lin:.3e}, |V*V - N| = {norm:.3e}")
        V.setflags(write=False)
        object.__setattr__(self, "V", V)

    @property
    def n(self):
        return self.V.size // 2


def sphere_residuals(V):
    """(|C V + V|, |V* V - N|)."""
    V = np.asarray(V)
    N = V.size
    CV = np.concatenate([V[N // 2:], V[:N // 2]])
    return float(np.linalg.norm(CV + V)), float(abs(np.vdot(V, V).real - N))


def E_vector(n):
    return SpherePoint(np.concatenate([np.ones(n), -np.ones(n)]))


def xi(V, c):
    """xi(V) = i mu (V V* - 1) + i (mu - nu) C, an element of k."""
    if not isinstance(V, SpherePoint):
        V = SpherePoint(V)
    v = V.V
    N = v.size
    return 1j * c.mu * (np.outer(v, v.conj()) - np.eye(N)) + 1j * (c.mu - c.nu) * build_C(N // 2)


def k_residual(eta):
    """max(|eta* eta - 1|, |eta* C eta - C|)."""
    N = eta.shape[0]
    return max(np.linalg.norm(eta.conj().T @ eta - np.eye(N)), group_residual(eta))


def require_K(eta, name="eta"):
    res = k_residual(eta)
    if not res < K_TOL:
        raise MembershipError(f"{name} is not in K: residual {res:.3e}")


def _k_basis(n):
    # Q is symmetric and involutive, and Q C Q = diag(1_n, -1_n)
    I = np.eye(n)
    return np.block([[I, I], [I, -I]]) / np.sqrt(2.0)


def random_K(n, rng=None):
    """A Haar-random element of K, built as Q diag(U1, U2) Q with U1, U2 in U(n)."""
    rng = np.random.default_rng(rng)
    U1 = unitary_group.rvs(n, random_state=rng) if n > 1 else np.exp(2j * np.pi * rng.random()) * np.ones((1, 1))
    U2 = unitary_group.rvs(n, random_state=rng) if n > 1 else np.exp(2j * np.pi * rng.random()) * np.ones((1, 1))
    Q = _k_basis(n)
    Z = np.zeros((n, n))
    eta = Q @ np.block([[U1, Z], [Z, U2]]) @ Q
    require_K(eta)
    return eta


def random_diagonal_K(n, rng=None):
    """exp(i diag(phi, phi)), the diagonal torus inside K."""
    rng = np.random.default_rng(rng)
    phi = rng.uniform(0, 2 * np.pi, n)
    return np.diag(np.exp(1j * np.concatenate([phi, phi])))


def group_inverse(y):
    """y^{-1} = C y* C for y in U(n, n)."""
    C = build_C(y.shape[0] // 2)
    return C @ y.conj().T @ C


@dataclass(frozen=True)
class ExtendedPoint:
    """(y, Y, rho) with y in U(n, n), Y in u(n, n) and rho in k."""

    y: np.ndarray
    Y: np.ndarray
    rho: np.ndarray

    def __post_init__(self):
        scale = lambda M: 1e-10 * (1.0 + np.linalg.norm(M) ** 2)
        if not group_residual(self.y) < scale(self.y):
            raise MembershipError(f"y is not in U(n, n): residual {group_residual(self.y):.3e}")
        if not algebra_residual(self.Y) < scale(self.Y):
            raise MembershipError(f"Y is not in u(n, n): residual {algebra_residual(self.Y):.3e}")
        herm = np.linalg.norm(self.rho + self.rho.conj().T)
        if not (algebra_residual(self.rho) < scale(self.rho) and herm < scale(self.rho)):
            raise MembershipError("rho is not in k")


def upsilon(p, c, eta_L=None, eta_R=None):
    """(eta_L A^{1/2} eta_R^{-1}, eta_R Lambda eta_R^{-1}, eta_L xi(V) eta_L^{-1})."""
    N = 2 * p.n
    eta_L = np.eye(N, dtype=complex) if eta_L is None else np.asarray(eta_L)
    eta_R = np.eye(N, dtype=complex) if eta_R is None else np.asarray(eta_R)
    require_K(eta_L, "eta_L")
    require_K(eta_R, "eta_R")
    # K is unitary, so the inverse is the adjoint
    Li, Ri = eta_L.conj().T, eta_R.conj().T
    y = eta_L @ sqrt_lax_A(p, c) @ Ri
    Y = eta_R @ lambda_matrix(p.lam) @ Ri
    rho = eta_L @ xi(V_vector(p, c), c) @ Li
    return ExtendedPoint(y, Y, rho)


def momentum_map(e):
    """((y Y y^{-1})_+ + rho, -Y_+)."""
    conj = e.y @ e.Y @ group_inverse(e.y)
    return cartan_split(conj)[0] + e.rho, -cartan_split(e.Y)[0]


def momentum_norm(e):
    first, second = momentum_map(e)
    return float(np.sqrt(np.linalg.norm(first) ** 2 + np.linalg.norm(second) ** 2))


def reduced_hamiltonian(e):
    """tr(y y*) / 2 on the extended phase space."""
    return float(0.5 * np.trace(e.y @ e.y.conj().T).real)


def orbit_spectrum(V, c):
    """Sorted imaginary parts of the eigenvalues of xi(V) (which is anti-Hermitian)."""
    return np.sort(np.linalg.eigvalsh(-1j * xi(V, c)))


def lax_trace_half(p, c):
    return float(0.5 * np.trace(lax_A(p, c)).real)
