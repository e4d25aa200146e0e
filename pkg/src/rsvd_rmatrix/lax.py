"""Phase space, couplings and the Lax matrices of the rational BC_n RSvD model."""
import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import polar

from .algebra import build_C
from .errors import ChamberError, CouplingError, DomainError

#: default minimal chamber gap for lambda_a - lambda_{a+1} and lambda_n
MIN_GAP = 1e-6
#: eigenvalue floor (relative) for the principal square root
EIG_FLOOR = 1e-12


def check_chamber(lam, min_gap=MIN_GAP):
    lam = np.asarray(lam, dtype=float)
    if lam.ndim != 1 or lam.size < 1:
        raise ChamberError("lambda must be a nonempty 1-d array")
    if not np.all(np.isfinite(lam)):
        raise ChamberError(f"non-finite lambda {lam}")
    gaps = np.append(-np.diff(lam), lam[-1])
    if np.any(gaps <= min_gap):
        raise ChamberError(f"lambda={lam} is outside the chamber (min gap {gaps.min():.3e})")
    return lam


@dataclass(frozen=True)
class PhasePoint:
    """A point (lambda, theta) with lambda_1 > ... > lambda_n > 0."""

    lam: np.ndarray
    theta: np.ndarray
    min_gap: float = field(default=MIN_GAP, compare=False)

    def __post_init__(self):
        lam = check_chamber(np.array(self.lam, dtype=float), self.min_gap)
        theta = np.array(self.theta, dtype=float).reshape(-1)
        if theta.shape != lam.shape:
            raise ChamberError(f"theta has shape {theta.shape}, expected {lam.shape}")
        lam.setflags(write=False)
        theta.setflags(write=False)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "theta", theta)

    @property
    def n(self):
        return self.lam.size

    def replace(self, lam=None, theta=None, min_gap=None):
        return PhasePoint(self.lam if lam is None else lam,
                          self.theta if theta is None else theta,
                          self.min_gap if min_gap is None else min_gap)

    def as_vector(self):
        return np.concatenate([self.lam, self.theta])

    @classmethod
    def from_vector(cls, y, min_gap=MIN_GAP):
        n = len(y) // 2
        return cls(y[:n], y[n:], min_gap)


@dataclass(frozen=True)
class Couplings:
    """Coupling constants with mu < 0 < nu and nu * kappa >= 0."""

    mu: float
    nu: float
    kappa: float = 0.0

    def __post_init__(self):
        for name in ("mu", "nu", "kappa"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not (self.mu < 0.0 < self.nu):
            raise CouplingError(f"need mu < 0 < nu, got mu={self.mu}, nu={self.nu}")
        if self.nu * self.kappa < 0.0:
            raise CouplingError(f"need nu*kappa >= 0, got kappa={self.kappa}")

    def with_kappa(self, kappa):
        return Couplings(self.mu, self.nu, kappa)


class LaxVariant(enum.Enum):
    A = "A"
    A_TILDE = "A_tilde"
    A_HAT = "A_hat"
    A_CHECK = "A_check"


def z_values(p, c):
    lam = p.lam
    z = -(1.0 + 1j * c.nu / lam)
    for a in range(p.n):
        for d in range(p.n):
            if d != a:
                z[a] *= (1.0 + 2j * c.mu / (lam[a] - lam[d])) * (1.0 + 2j * c.mu / (lam[a] + lam[d]))
    return z


def F_vector(p, c):
    z = z_values(p, c)
    root = np.sqrt(np.abs(z))
    return np.concatenate([np.exp(p.theta) * root, np.exp(-p.theta) * z.conj() / root])


def lax_A(p, c):
    """The Hermitian, positive definite Lax matrix of the C_n model (kappa plays no role)."""
    if c.mu == 0.0:
        raise CouplingError("the Lax matrix is undefined for mu = 0")
    n, lam, mu = p.n, p.lam, c.mu
    F = F_vector(p, c)
    Fu, Fl = F[:n], F[n:]
    dl = lam[:, None] - lam[None, :]
    sl = lam[:, None] + lam[None, :]
    upper = 2j * mu * np.outer(Fu, Fu.conj()) / (2j * mu + dl)
    lower = 2j * mu * np.outer(Fl, Fl.conj()) / (2j * mu - dl)
    corner = 2j * mu * np.outer(Fu, Fl.conj()) / (2j * mu + sl)
    corner += np.diag(1j * (mu - c.nu) / (1j * mu + lam))
    return np.block([[upper, corner], [corner.conj().T, lower]])


def hermitian_power(A, power):
    """A**power for Hermitian positive definite A via eigendecomposition."""
    w, U = np.linalg.eigh(A)
    if w[0] < EIG_FLOOR * w[-1]:
        raise DomainError(f"matrix is not numerically positive definite (eigenvalues {w[0]:.3e}..{w[-1]:.3e})")
    return (U * w ** power) @ U.conj().T


def group_sqrt(A):
    """(A^{1/2}, A^{-1/2}) for Hermitian positive definite A in U(n, n).

    Such A satisfies A^{-1} = C A C, so its spectrum pairs w with 1/w and
    C maps the eigenvectors of w to those of 1/w.  Only the top half of the
    spectrum, which eigh resolves to full relative accuracy, is used; the
    bottom half is its C-image.  This keeps A^{-1/2} F accurate even when
    cond(A) reaches 1e9.
    """
    n = A.shape[0] // 2
    w, U = np.linalg.eigh(A)
    top, wt = U[:, n:], w[n:]
    if not w[0] > EIG_FLOOR * w[-1]:
        raise DomainError(f"matrix is not positive definite (eigenvalues {w[0]:.3e}..{w[-1]:.3e})")
    C = build_C(n)
    up = (top * np.sqrt(wt)) @ top.conj().T
    down = (top / np.sqrt(wt)) @ top.conj().T
    return up + C @ down @ C, C @ up @ C + down


def graded_root(p, c):
    """(A^{1/2}, V) with V = A^{-1/2} F, computed through the theta grading.

    A depends on theta only as A = D A0 D with D = diag(e^theta, e^-theta)
    and A0 the Lax matrix at theta = 0, while F = D F0.  If U is the unitary
    polar factor of T = D A0^{1/2}, then A^{1/2} = T U* and A^{-1/2} F =
    U A0^{-1/2} F0.  Large rapidities therefore only enter through a unitary
    rotation, and V stays on the sphere to rounding even when cond(A)
    exceeds 1e10.
    """
    p0 = p.replace(theta=np.zeros(p.n))
    up0, down0 = group_sqrt(lax_A(p0, c))
    d = np.exp(np.concatenate([p.theta, -p.theta]))
    T = d[:, None] * up0
    U = polar(T, side="left")[0]
    return T @ U.conj().T, U @ (down0 @ F_vector(p0, c))


def sqrt_lax_A(p, c):
    return graded_root(p, c)[0]


def V_vector(p, c):
    """V = A^{-1/2} F, a point of the sphere S."""
    return graded_root(p, c)[1]


def alpha_beta(x, kappa):
    x = np.asarray(x, dtype=float)
    u = x + np.sqrt(x * x + kappa * kappa)
    return np.sqrt(u) / np.sqrt(2 * x), 1j * kappa / (np.sqrt(2 * x) * np.sqrt(u))


def alpha_beta_derivatives(x, kappa):
    """d alpha/dx and d beta/dx, from the log-derivatives (1/s - 1/x)/2 and -(1/s + 1/x)/2."""
    x = np.asarray(x, dtype=float)
    s = np.sqrt(x * x + kappa * kappa)
    alpha, beta = alpha_beta(x, kappa)
    return 0.5 * alpha * (1 / s - 1 / x), -0.5 * beta * (1 / s + 1 / x)


def P_Q(x, kappa):
    """P = alpha^2 - beta^2 = sqrt(1 + kappa^2/x^2) and Q = 2 alpha beta = i kappa / x."""
    x = np.asarray(x, dtype=float)
    return np.sqrt(1 + kappa ** 2 / x ** 2), 1j * kappa / x


def _block(diag_d, diag_o, n):
    return np.block([[np.diag(diag_d), np.diag(diag_o)],
                     [-np.diag(diag_o), np.diag(diag_d)]]).astype(complex)


def _coords(p, c):
    """(lambda, kappa) from a PhasePoint and Couplings, or from raw values."""
    lam = p.lam if isinstance(p, PhasePoint) else np.asarray(p, dtype=float)
    kappa = c.kappa if isinstance(c, Couplings) else float(c)
    return np.atleast_1d(lam), kappa


def h_matrix(p, c):
    """The gauge element [[diag alpha, diag beta], [-diag beta, diag alpha]].

    Accepts a PhasePoint and Couplings, or a lambda vector and kappa.
    """
    lam, kappa = _coords(p, c)
    alpha, beta = alpha_beta(lam, kappa)
    return _block(alpha, beta, lam.size)


def h_inverse(p, c):
    # alpha^2 + beta^2 = 1 makes the inverse a block-sign flip
    lam, kappa = _coords(p, c)
    alpha, beta = alpha_beta(lam, kappa)
    return _block(alpha, -beta, lam.size)


def h_inverse_derivative(p, c, k):
    """d(h^{-1})/d lambda_k."""
    lam, kappa = _coords(p, c)
    n = lam.size
    da, db = alpha_beta_derivatives(lam[k], kappa)
    M = np.zeros((2 * n, 2 * n), dtype=complex)
    M[k, k] = M[n + k, n + k] = da
    M[k, n + k] = -db
    M[n + k, k] = db
    return M


def H_matrix(p, c):
    """The gauge matrix h^2 = [[P, Q], [-Q, P]]."""
    lam, kappa = _coords(p, c)
    P, Q = P_Q(lam, kappa)
    return _block(P, Q, lam.size)


def H_inverse(p, c):
    # P^2 + Q^2 = 1
    lam, kappa = _coords(p, c)
    P, Q = P_Q(lam, kappa)
    return _block(P, -Q, lam.size)


def lax_variant(p, c, v=LaxVariant.A):
    v = LaxVariant(v)
    A = lax_A(p, c)
    if v is LaxVariant.A:
        return A
    if v is LaxVariant.A_TILDE:
        hi = h_inverse(p, c)
        return hi @ A @ hi
    if v is LaxVariant.A_HAT:
        return A @ H_inverse(p, c)
    return H_inverse(p, c) @ A


def energy_weights(lam, c):
    """The lambda-dependent factor multiplying cosh(2 theta_c) in the Hamiltonian."""
    lam = np.asarray(lam, dtype=float)
    w = np.sqrt(1 + c.nu ** 2 / lam ** 2) * np.sqrt(1 + c.kappa ** 2 / lam ** 2)
    if lam.size > 1:
        mu2 = 4 * c.mu ** 2
        diff = lam[:, None] - lam[None, :]
        np.fill_diagonal(diff, np.inf)
        summ = lam[:, None] + lam[None, :]
        np.fill_diagonal(summ, np.inf)
        w = w * np.prod(np.sqrt(1 + mu2 / diff ** 2) * np.sqrt(1 + mu2 / summ ** 2), axis=1)
    return w


def hamiltonian(p, c):
    if c.mu == 0.0:
        raise CouplingError("the Hamiltonian is undefined for mu = 0")
    lam = p.lam
    kinetic = np.sum(np.cosh(2 * p.theta) * energy_weights(lam, c))
    tail = c.nu * c.kappa / (4 * c.mu ** 2)
    return float(kinetic + tail * (np.prod(1 + 4 * c.mu ** 2 / lam ** 2) - 1))


def in_group(y, rtol=1e-9):
    C = build_C(y.shape[0] // 2)
    return np.linalg.norm(y.conj().T @ C @ y - C) < rtol * np.linalg.norm(y) ** 2
