"""The real form u(n, n) of gl(2n, C), its Cartan data and a root-adapted basis.

Conventions
-----------
Indices are 0-based throughout: particle labels run over ``range(n)`` and
matrix indices over ``range(N)`` with ``N = 2 n``.

The basis is enumerated in a fixed order::

    D_0^+ ... D_{n-1}^+,  D_0^- ... D_{n-1}^-,
    then for each positive root (e_a - e_b, lexicographic in (a, b);
    e_a + e_b, lexicographic; 2 e_c, ascending c) the flavors
    (+, r), (+, i), (-, r), (-, i)   [2 e_c carries only the i flavors].

``D^+`` and ``X^{+, .}`` span the compact part k (anti-Hermitian matrices),
``D^-`` and ``X^{-, .}`` span p (Hermitian matrices).  Under the trace form
the basis is orthogonal with squared norms -1 on k and +1 on p.
"""
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DomainError, MembershipError, RegularityError

SQRT2 = np.sqrt(2.0)

#: relative Frobenius tolerance for membership tests
MEMBERSHIP_RTOL = 1e-10
#: default regularity margin factor, scaled by max(1, |lambda|_inf)
REGULARITY_FACTOR = 1e-8

DIFF, SUM, DOUBLE = "diff", "sum", "double"


@dataclass(frozen=True)
class Root:
    """A positive root of type C_n: e_a - e_b, e_a + e_b (a < b) or 2 e_c."""

    kind: str
    a: int
    b: int

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=float)
        if self.kind == DIFF:
            return lam[self.a] - lam[self.b]
        if self.kind == SUM:
            return lam[self.a] + lam[self.b]
        return 2.0 * lam[self.a]

    @property
    def flavors(self):
        return ("i",) if self.kind == DOUBLE else ("r", "i")

    def __str__(self):
        if self.kind == DIFF:
            return f"e{self.a + 1}-e{self.b + 1}"
        if self.kind == SUM:
            return f"e{self.a + 1}+e{self.b + 1}"
        return f"2e{self.a + 1}"


@dataclass(frozen=True)
class BasisElement:
    """One real basis vector of u(n, n).

    ``kind`` is ``"D"`` or ``"X"``; ``sign`` is ``"+"`` (in k) or ``"-"`` (in p).
    For ``D`` elements ``index`` is the particle label and ``root`` is None;
    for ``X`` elements ``root`` and ``flavor`` identify the vector.
    """

    kind: str
    sign: str
    matrix: np.ndarray = field(repr=False, compare=False)
    index: int = None
    root: Root = None
    flavor: str = None

    @property
    def label(self):
        if self.kind == "D":
            return f"D{self.index + 1}^{self.sign}"
        return f"X[{self.root}]^({self.sign},{self.flavor})"

    @property
    def norm(self):
        """tr(B B): -1 on k, +1 on p."""
        return -1.0 if self.sign == "+" else 1.0


def positive_roots(n):
    roots = [Root(DIFF, a, b) for a in range(n) for b in range(a + 1, n)]
    roots += [Root(SUM, a, b) for a in range(n) for b in range(a + 1, n)]
    roots += [Root(DOUBLE, c, c) for c in range(n)]
    return tuple(roots)


def _frozen(M):
    M.setflags(write=False)
    return M


def _e(N, k, l):
    M = np.zeros((N, N), dtype=complex)
    M[k, l] = 1.0
    return M


@lru_cache(maxsize=None)
def build_C(n):
    """The involutive matrix [[0, 1_n], [1_n, 0]] defining U(n, n)."""
    I = np.eye(n)
    Z = np.zeros((n, n))
    return _frozen(np.block([[Z, I], [I, Z]]).astype(complex))


@lru_cache(maxsize=None)
def d_plus(n, c):
    N = 2 * n
    return _frozen(1j / SQRT2 * (_e(N, c, c) + _e(N, n + c, n + c)))


@lru_cache(maxsize=None)
def d_minus(n, c):
    N = 2 * n
    return _frozen((_e(N, c, c) - _e(N, n + c, n + c)) / SQRT2)


@lru_cache(maxsize=None)
def x_matrix(n, root, sign, flavor):
    """The matrix X_root^{sign, flavor}; ``sign`` in {'+', '-'}, ``flavor`` in {'r', 'i'}."""
    N = 2 * n
    s = 1.0 if sign == "+" else -1.0
    a, b = root.a, root.b
    e = lambda k, l: _e(N, k, l)
    if root.kind == DOUBLE:
        if flavor != "i":
            raise DomainError(f"root {root} has no real flavor")
        M = -1j / SQRT2 * (e(a, n + a) + s * e(n + a, a))
    elif root.kind == DIFF and flavor == "r":
        M = 0.5 * (e(a, b) - s * e(b, a) + s * e(n + a, n + b) - e(n + b, n + a))
    elif root.kind == SUM and flavor == "r":
        M = -0.5 * (e(a, n + b) - e(b, n + a) + s * e(n + a, b) - s * e(n + b, a))
    elif root.kind == DIFF:
        M = 0.5j * (e(a, b) + s * e(b, a) + s * e(n + a, n + b) + e(n + b, n + a))
    else:
        M = -0.5j * (e(a, n + b) + e(b, n + a) + s * e(n + a, b) + s * e(n + b, a))
    return _frozen(M)


@lru_cache(maxsize=None)
def basis(n):
    """All N^2 basis elements of u(n, n) in the documented order."""
    if n < 1:
        raise DomainError("n must be a positive integer")
    elements = [BasisElement("D", "+", d_plus(n, c), index=c) for c in range(n)]
    elements += [BasisElement("D", "-", d_minus(n, c), index=c) for c in range(n)]
    for root in positive_roots(n):
        for sign in "+-":
            for flavor in root.flavors:
                elements.append(
                    BasisElement("X", sign, x_matrix(n, root, sign, flavor),
                                 root=root, flavor=flavor))
    return tuple(elements)


@lru_cache(maxsize=None)
def root_table(n):
    """Stacked root-space data: (roots, flavors, X^+ stack, X^- stack).

    One entry per (root, flavor) pair, in basis order.
    """
    roots, flavors, xp, xm = [], [], [], []
    for root in positive_roots(n):
        for flavor in root.flavors:
            roots.append(root)
            flavors.append(flavor)
            xp.append(x_matrix(n, root, "+", flavor))
            xm.append(x_matrix(n, root, "-", flavor))
    return tuple(roots), tuple(flavors), _frozen(np.array(xp)), _frozen(np.array(xm))


def root_values(n, lam):
    """alpha(lambda) for every (root, flavor) pair of ``root_table(n)``."""
    roots = root_table(n)[0]
    return np.array([root(lam) for root in roots])


def dimension_of(Y):
    N = Y.shape[0]
    if Y.shape != (N, N) or N % 2:
        raise DomainError(f"expected an even-sized square matrix, got shape {Y.shape}")
    return N // 2


def algebra_residual(Y):
    """Frobenius norm of Y* C + C Y (zero exactly on u(n, n))."""
    C = build_C(dimension_of(Y))
    return np.linalg.norm(Y.conj().T @ C + C @ Y)


def group_residual(y):
    """Frobenius norm of y* C y - C (zero exactly on U(n, n))."""
    C = build_C(dimension_of(y))
    return np.linalg.norm(y.conj().T @ C @ y - C)


def _membership_tol(Y):
    return MEMBERSHIP_RTOL * (1.0 + np.linalg.norm(Y))


def in_algebra(Y):
    return algebra_residual(Y) < _membership_tol(Y)


def require_algebra(Y):
    res = algebra_residual(Y)
    if not res < _membership_tol(Y):
        raise MembershipError(f"matrix is not in u(n, n): |Y*C + CY| = {res:.3e}")


def cartan_split(Y):
    """Y = Y_+ + Y_- with Y_+ anti-Hermitian (in k) and Y_- Hermitian (in p)."""
    require_algebra(Y)
    Yh = Y.conj().T
    return (Y - Yh) / 2, (Y + Yh) / 2


def _diag_part(Y):
    return np.diag(np.diag(Y))


def refined_split(Y):
    """Components of Y in m, m-perp, a, a-perp (in that order)."""
    Yp, Ym = cartan_split(Y)
    Yp_d, Ym_d = _diag_part(Yp), _diag_part(Ym)
    return Yp_d, Yp - Yp_d, Ym_d, Ym - Ym_d


def bilinear(Y1, Y2):
    """The trace form tr(Y1 Y2), real on u(n, n)."""
    require_algebra(Y1)
    require_algebra(Y2)
    value = np.trace(Y1 @ Y2)
    scale = 1.0 + np.linalg.norm(Y1) * np.linalg.norm(Y2)
    if abs(value.imag) > 1e-12 * scale:
        raise DomainError(f"trace form has imaginary part {value.imag:.3e}")
    return float(value.real)


def expand(Y):
    """Coefficients of Y in ``basis(n)`` via the signed trace pairing.

    Works for any complex matrix, since the basis also spans gl(N, C).
    """
    n = dimension_of(Y)
    stack = basis_stack(n)
    norms = np.array([el.norm for el in basis(n)])
    return np.einsum("kij,ji->k", stack, Y) / norms


def reconstruct(n, coefficients):
    return np.einsum("k,kij->ij", coefficients, basis_stack(n))


@lru_cache(maxsize=None)
def basis_stack(n):
    return _frozen(np.array([el.matrix for el in basis(n)]))


def lambda_matrix(lam):
    lam = np.asarray(lam, dtype=float)
    return np.diag(np.concatenate([lam, -lam])).astype(complex)


def ad_lambda(lam, Y):
    """[Lambda(lambda), Y], computed without forming Lambda."""
    lam = np.asarray(lam, dtype=float)
    d = np.concatenate([lam, -lam])
    return (d[:, None] - d[None, :]) * Y


def regularity_margin(lam):
    return REGULARITY_FACTOR * max(1.0, float(np.max(np.abs(lam))))


def ad_lambda_inverse(lam, Z, margin=None):
    """Inverse of ad_Lambda(lambda) restricted to m-perp + a-perp.

    Z is expanded in the X-basis, and each X^{+/-} coefficient is moved to
    X^{-/+} and divided by the root value.
    """
    lam = np.asarray(lam, dtype=float)
    n = lam.size
    if margin is None:
        margin = regularity_margin(lam)
    values = root_values(n, lam)
    if np.min(np.abs(values)) < margin:
        raise RegularityError(
            f"lambda={lam} is not regular: min |alpha(lambda)| = {np.min(np.abs(values)):.3e}")
    if np.linalg.norm(np.diag(Z)) > _membership_tol(Z):
        raise DomainError("argument has a nonzero component along the diagonal subalgebra")
    _, _, xp, xm = root_table(n)
    # signed pairing: tr(X^+ X^+) = -1, tr(X^- X^-) = +1
    cp = -np.einsum("kij,ji->k", xp, Z)
    cm = np.einsum("kij,ji->k", xm, Z)
    return np.einsum("k,kij->ij", cp / values, xm) + np.einsum("k,kij->ij", cm / values, xp)
