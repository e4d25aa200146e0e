"""Dynamical structure coefficients of the quadratic r-matrix algebra.

Three families of quadratic coefficients (a, b, c, d) are provided:

* ``plain``  for the Lax matrix A of the C_n model (kappa plays no role),
* ``tilde``  for A~ = h^{-1} A h^{-1},
* ``hat``    for A^ = A H^{-1}, H = h^2,

each satisfying ``{L (x), L} = a L1 L2 + L1 b L2 - L2 c L1 - L1 L2 d``.
Tensors are N^2 x N^2 matrices in the Kronecker layout of :mod:`.tensor`.
"""
from dataclasses import dataclass

import numpy as np

from . import algebra as al
from .errors import SymmetryError
from .lax import (
    F_vector, H_inverse, H_matrix, LaxVariant, P_Q, h_inverse, h_inverse_derivative,
    h_matrix, lax_variant,
)
from .tensor import left, partial_trace_2, right, swap, vee, wedge

SQRT2 = np.sqrt(2.0)
FAMILIES = ("plain", "tilde", "hat")
FAMILY_VARIANT = {"plain": LaxVariant.A, "tilde": LaxVariant.A_TILDE, "hat": LaxVariant.A_HAT}


def _structure_vectors(p, c, sign):
    """S_a (sign='-') or T_a (sign='+')."""
    n, lam = p.n, p.lam
    F = F_vector(p, c)
    Fu, Fl = F[:n].real, F[n:]
    X = lambda kind, i, j, flavor: al.x_matrix(n, al.Root(kind, i, j), sign, flavor)
    # T mirrors S with the X^{+} vectors and flipped signs, except on the
    # e_c - e_a (c < a) terms which keep theirs
    t = 1.0 if sign == "-" else -1.0
    out = []
    for a in range(n):
        M = -t * SQRT2 * Fl[a].real / (2 * lam[a]) * X(al.DOUBLE, a, a, "i")
        for cc in range(a):
            M = M + Fu[cc] / (lam[cc] - lam[a]) * X(al.DIFF, cc, a, "i")
            M = M + t * (-Fl[cc].real * X(al.SUM, cc, a, "i")
                         + Fl[cc].imag * X(al.SUM, cc, a, "r")) / (lam[cc] + lam[a])
        for cc in range(a + 1, n):
            M = M + t * Fu[cc] / (lam[a] - lam[cc]) * X(al.DIFF, a, cc, "i")
            M = M + t * (-Fl[cc].real * X(al.SUM, a, cc, "i")
                         - Fl[cc].imag * X(al.SUM, a, cc, "r")) / (lam[a] + lam[cc])
        out.append(M / (SQRT2 * Fu[a]))
    return out


def S_vectors(p, c):
    """The a-perp valued vectors S_a, one per particle."""
    return _structure_vectors(p, c, "-")


def T_vectors(p, c):
    """The m-perp valued vectors T_a, one per particle."""
    return _structure_vectors(p, c, "+")


def psi(p, c, a, b):
    """Psi_{a,b} for 0-based a < b."""
    if not 0 <= a < b < p.n:
        raise IndexError(f"psi needs 0 <= a < b < n, got a={a}, b={b}")
    d = p.lam[a] - p.lam[b]
    return 1.0 / d + d / (d * d + 4 * c.mu ** 2)


@dataclass(frozen=True)
class QuadCoefficients:
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray
    family: str = "plain"

    def residuals(self):
        """Consistency residuals (a21 + a12, d21 + d12, b21 - c12, a + b - c - d)."""
        return np.array([
            np.linalg.norm(swap(self.a) + self.a),
            np.linalg.norm(swap(self.d) + self.d),
            np.linalg.norm(swap(self.b) - self.c),
            np.linalg.norm(self.a + self.b - self.c - self.d),
        ])

    def scale(self):
        return max(np.linalg.norm(M) for M in (self.a, self.b, self.c, self.d))

    def consistency_residual(self):
        """Largest consistency residual relative to 1 + max coefficient norm."""
        return float(self.residuals().max() / (1.0 + self.scale()))

    def replace(self, **changes):
        fields = dict(a=self.a, b=self.b, c=self.c, d=self.d, family=self.family)
        fields.update(changes)
        return QuadCoefficients(**fields)


def plain_blocks(p, c):
    """The building blocks of the plain coefficients, keyed by name.

    ``root_wedge``/``root_vee``: sum over (alpha, eps) of X^- ^ X^+ / alpha(lambda)
    (resp. v); ``DS_wedge``, ``DS_vee``, ``DT_wedge``: sums over a of D^+_a with
    S_a or T_a; ``psi``: sum over a < b of Psi_{a,b} D^+_a ^ D^+_b.
    """
    n, lam = p.n, p.lam
    _, _, xp, xm = al.root_table(n)
    values = al.root_values(n, lam)
    NN = (2 * n) ** 2
    blocks = {k: np.zeros((NN, NN), dtype=complex)
              for k in ("root_wedge", "root_vee", "DS_wedge", "DS_vee", "DT_wedge", "psi")}
    for Xp, Xm, alpha in zip(xp, xm, values):
        blocks["root_wedge"] += wedge(Xm, Xp) / alpha
        blocks["root_vee"] += vee(Xm, Xp) / alpha
    for a, (S, T) in enumerate(zip(S_vectors(p, c), T_vectors(p, c))):
        D = al.d_plus(n, a)
        blocks["DS_wedge"] += wedge(D, S)
        blocks["DS_vee"] += vee(D, S)
        blocks["DT_wedge"] += wedge(D, T)
    for a in range(n):
        for b in range(a + 1, n):
            blocks["psi"] += psi(p, c, a, b) * wedge(al.d_plus(n, a), al.d_plus(n, b))
    return blocks


def quad_from_blocks(k):
    return QuadCoefficients(
        a=k["root_wedge"] + k["DS_wedge"] + k["DT_wedge"] + k["psi"],
        b=k["root_vee"] - k["DS_vee"] - k["DT_wedge"] - k["psi"],
        c=k["root_vee"] - k["DS_vee"] + k["DT_wedge"] + k["psi"],
        d=k["root_wedge"] + k["DS_wedge"] - k["DT_wedge"] - k["psi"],
        family="plain",
    )


def quad_plain(p, c):
    return quad_from_blocks(plain_blocks(p, c))


def gamma12(p, c):
    """Gamma_12 = 2^{-1/2} sum_c D^-_c (x) d(h^{-1})/d lambda_c."""
    n = p.n
    G = sum(np.kron(al.d_minus(n, k), h_inverse_derivative(p, c, k)) for k in range(n))
    return G / SQRT2


def H_log_derivative(lam, kappa, k):
    """H^{-1} dH/d lambda_k in closed form (a multiple of X_{2e_k}^{-,i})."""
    lam = np.asarray(lam, dtype=float)
    x = lam[k]
    coefficient = SQRT2 * kappa / (x * np.sqrt(x * x + kappa * kappa))
    return coefficient * al.x_matrix(lam.size, al.Root(al.DOUBLE, k, k), "-", "i")


def _omega12(p, c):
    """Omega_12 = 2^{-1/2} sum_c D^-_c (x) H^{-1} dH/d lambda_c."""
    n = p.n
    return sum(np.kron(al.d_minus(n, k), H_log_derivative(p.lam, c.kappa, k)) for k in range(n)) / SQRT2


def _omega12_from_gamma(p, c):
    """Omega_12 = -(h_2^{-1} Gamma_12 + Gamma_12 h_2^{-1}) H_2 (the defining form)."""
    hi2 = right(h_inverse(p, c))
    G = gamma12(p, c)
    return -(hi2 @ G + G @ hi2) @ right(H_matrix(p, c))


def quad_tilde(p, c, plain=None):
    q = quad_plain(p, c) if plain is None else plain
    h, hi = h_matrix(p, c), h_inverse(p, c)
    h1, h2, hi1, hi2 = left(h), right(h), left(hi), right(hi)
    G12 = gamma12(p, c)
    G21 = swap(G12)
    return QuadCoefficients(
        a=hi1 @ hi2 @ q.a @ h1 @ h2 + hi1 @ G12 @ h1 @ h2 - hi2 @ G21 @ h1 @ h2,
        b=h1 @ hi2 @ q.b @ hi1 @ h2 + h1 @ G12 @ hi1 @ h2 - h1 @ hi2 @ G21 @ h2,
        c=hi1 @ h2 @ q.c @ h1 @ hi2 - hi1 @ h2 @ G12 @ h1 + h2 @ G21 @ h1 @ hi2,
        d=h1 @ h2 @ q.d @ hi1 @ hi2 - h1 @ h2 @ G12 @ hi1 + h1 @ h2 @ G21 @ hi2,
        family="tilde",
    )


def quad_hat(p, c, plain=None):
    q = quad_plain(p, c) if plain is None else plain
    n = p.n
    H, Hi = H_matrix(p, c), H_inverse(p, c)
    H1, H2, Hi1, Hi2 = left(H), right(H), left(Hi), right(Hi)
    Om12 = _omega12(p, c)
    Om21 = swap(Om12)
    return QuadCoefficients(
        a=q.a.copy(),
        b=H1 @ (q.b + Om21) @ Hi1,
        c=H2 @ (q.c + Om12) @ Hi2,
        d=H1 @ H2 @ (q.d + Om12 - Om21) @ Hi1 @ Hi2,
        family="hat",
    )


def quad_coefficients(p, c, family):
    if family == "plain":
        return quad_plain(p, c)
    if family == "tilde":
        return quad_tilde(p, c)
    if family == "hat":
        return quad_hat(p, c)
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


def quadratic_rhs(q, L):
    """a L1 L2 + L1 b L2 - L2 c L1 - L1 L2 d."""
    L1, L2 = left(L), right(L)
    return q.a @ L1 @ L2 + L1 @ q.b @ L2 - L2 @ q.c @ L1 - L1 @ L2 @ q.d


def linear_rhs(r12, L):
    """[r12, L1] - [r21, L2]."""
    L1, L2 = left(L), right(L)
    r21 = swap(r12)
    return r12 @ L1 - L1 @ r12 - (r21 @ L2 - L2 @ r21)


def r_from_quad(q, L, u12=None):
    """Linear r-matrix r12 = p+ L2 + L2 p- recovered from consistent quadratic data.

    ``u12`` is any swap-symmetric tensor (default zero); it shifts p+ and p-
    without changing the bracket.  Returns (r12, p_plus, p_minus).
    """
    if u12 is None:
        u12 = np.zeros_like(q.a)
    elif np.linalg.norm(swap(u12) - u12) > 1e-12 * (1.0 + np.linalg.norm(u12)):
        raise SymmetryError("u12 must satisfy u21 = u12")
    p_plus = (q.a + u12) / 2
    p_minus = (q.d - q.b - q.c - u12) / 2
    L2 = right(L)
    return p_plus @ L2 + L2 @ p_minus, p_plus, p_minus


def linear_residual(q, L, u12=None):
    """|linear - quadratic| relative to 1 + the larger of |quadratic| and |r12 L1|.

    With a large u12 the linear terms are far bigger than their sum, so the
    rounding error scales with them rather than with the bracket itself.
    """
    quad = quadratic_rhs(q, L)
    r12, _, _ = r_from_quad(q, L, u12)
    scale = 1.0 + max(np.linalg.norm(quad), np.linalg.norm(r12 @ left(L)))
    return float(np.linalg.norm(linear_rhs(r12, L) - quad) / scale)


def lax_pair_B(p, c):
    """The matrix B^ with X_H[A^] = [B^, A^]."""
    n, lam, kappa = p.n, p.lam, c.kappa
    Ahat = lax_variant(p, c, LaxVariant.A_HAT)
    Acheck = lax_variant(p, c, LaxVariant.A_CHECK)
    plus, minus = Ahat + Acheck, Ahat - Acheck
    _, _, xp, xm = al.root_table(n)
    values = al.root_values(n, lam)
    B = np.zeros((2 * n, 2 * n), dtype=complex)
    for Xp, Xm, alpha in zip(xp, xm, values):
        B += (np.trace(Xp @ minus) * Xm - np.trace(Xm @ plus) * Xp) / (2 * alpha)
    for k, (S, T) in enumerate(zip(S_vectors(p, c), T_vectors(p, c))):
        B += 0.5 * np.trace(S @ plus + T @ minus) * al.d_plus(n, k)
        X2 = al.x_matrix(n, al.Root(al.DOUBLE, k, k), "-", "i")
        x = lam[k]
        B -= 0.5 * kappa * np.trace(X2 @ Acheck) / (x * np.sqrt(x * x + kappa * kappa)) * al.d_minus(n, k)
    return B


def lax_pair_B_from_rmatrix(p, c):
    """B^ = tr_2((a^ - c^) A^_2) / 2, straight from the hat coefficients."""
    q = quad_hat(p, c)
    Ahat = lax_variant(p, c, LaxVariant.A_HAT)
    return 0.5 * partial_trace_2((q.a - q.c) @ right(Ahat))


def functional_identities(x, y, kappa):
    """Residuals of the three identities obeyed by P and Q (x != y, both positive).

    The two-point identities are evaluated with denominators cleared, since
    dividing a cancelling numerator by x - y would amplify rounding near
    x = y.  Each residual is relative to 1 + the largest summand.
    """
    Px, Qx = P_Q(x, kappa)
    Py, Qy = P_Q(y, kappa)
    pp = Px ** 2 * Py ** 2
    s, d = x + y, x - y
    identities = (
        (Px ** 2, -Qx ** 2, -(1 + 2 * kappa ** 2 / x ** 2)),
        (s * pp, -s * (Qx * Qy - 1) ** 2, d * Px ** 2 * Qy ** 2, -d * Py ** 2 * Qx ** 2),
        (s * Px ** 2 * Qy ** 2, -s * Py ** 2 * Qx ** 2, d * pp, -d * (Qx * Qy + 1) ** 2),
    )
    return np.array([abs(sum(terms)) / (1 + max(abs(t) for t in terms)) for terms in identities])


# (relation, source sign/flavor/root, diagonal coefficient, partner sign/flavor/root, partner coefficient)
# for a < b; "M" is e_a - e_b, "P" is e_a + e_b.  Coefficients are functions of
# (PaPb, QaQb, PaQb, PbQa).
_PAIR_RELATIONS = (
    ("X+r[M]", ("+", "r", "M"), lambda pp, qq, pq, qp: pp + qq, ("-", "i", "P"), lambda pp, qq, pq, qp: 1j * (pq - qp)),
    ("X-r[M]", ("-", "r", "M"), lambda pp, qq, pq, qp: pp - qq, ("+", "i", "P"), lambda pp, qq, pq, qp: 1j * (pq + qp)),
    ("X+r[P]", ("+", "r", "P"), lambda pp, qq, pq, qp: pp - qq, ("-", "i", "M"), lambda pp, qq, pq, qp: -1j * (pq + qp)),
    ("X-r[P]", ("-", "r", "P"), lambda pp, qq, pq, qp: pp + qq, ("+", "i", "M"), lambda pp, qq, pq, qp: -1j * (pq - qp)),
    ("X+i[M]", ("+", "i", "M"), lambda pp, qq, pq, qp: pp + qq, ("-", "r", "P"), lambda pp, qq, pq, qp: -1j * (pq - qp)),
    ("X-i[M]", ("-", "i", "M"), lambda pp, qq, pq, qp: pp - qq, ("+", "r", "P"), lambda pp, qq, pq, qp: -1j * (pq + qp)),
    ("X+i[P]", ("+", "i", "P"), lambda pp, qq, pq, qp: pp - qq, ("-", "r", "M"), lambda pp, qq, pq, qp: 1j * (pq + qp)),
    ("X-i[P]", ("-", "i", "P"), lambda pp, qq, pq, qp: pp + qq, ("+", "r", "M"), lambda pp, qq, pq, qp: 1j * (pq - qp)),
)


def commutation_relations(p, c):
    """Yield (relation, label, H^{-1} v H, expected) for every basis vector v.

    Conjugation by the gauge matrix H fixes D^+_c and X^{-,i}_{2e_c}, rotates
    D^-_c into X^{+,i}_{2e_c} and mixes the e_a - e_b and e_a + e_b root
    spaces with coefficients built from P and Q.
    """
    n = p.n
    lam, kappa = p.lam, c.kappa
    H, Hi = H_matrix(p, c), H_inverse(p, c)
    P, Q = P_Q(lam, kappa)
    conj = lambda v: Hi @ v @ H
    for k in range(n):
        X2p = al.x_matrix(n, al.Root(al.DOUBLE, k, k), "+", "i")
        X2m = al.x_matrix(n, al.Root(al.DOUBLE, k, k), "-", "i")
        Dp, Dm = al.d_plus(n, k), al.d_minus(n, k)
        diag, off = P[k] ** 2 - Q[k] ** 2, 2j * P[k] * Q[k]
        yield "D+", f"D{k + 1}+", conj(Dp), Dp
        yield "D-", f"D{k + 1}-", conj(Dm), diag * Dm + off * X2p
        yield "X+i[2e]", f"X+i[2e{k + 1}]", conj(X2p), diag * X2p + off * Dm
        yield "X-i[2e]", f"X-i[2e{k + 1}]", conj(X2m), X2m
    for a in range(n):
        for b in range(a + 1, n):
            roots = {"M": al.Root(al.DIFF, a, b), "P": al.Root(al.SUM, a, b)}
            args = (P[a] * P[b], Q[a] * Q[b], P[a] * Q[b], P[b] * Q[a])
            for name, (s, f, r), coef, (s2, f2, r2), coef2 in _PAIR_RELATIONS:
                v = al.x_matrix(n, roots[r], s, f)
                w = al.x_matrix(n, roots[r2], s2, f2)
                yield name, f"{name}[{a + 1},{b + 1}]", conj(v), coef(*args) * v + coef2(*args) * w


def commutation_residual(p, c):
    """Largest entrywise deviation of each of the twelve relations (absent ones are skipped)."""
    worst = {}
    for relation, _, lhs, rhs in commutation_relations(p, c):
        worst[relation] = max(worst.get(relation, 0.0), float(np.max(np.abs(lhs - rhs))))
    return worst


COMMUTATION_RELATIONS = ("D+", "D-", "X+i[2e]", "X-i[2e]") + tuple(r[0] for r in _PAIR_RELATIONS)
