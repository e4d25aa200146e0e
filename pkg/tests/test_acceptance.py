"""Acceptance criteria, one test each.

Every test appends a one-line PASS/FAIL summary (printed at the end of the
pytest run under "acceptance criteria") before asserting, so the summary is
complete even when a criterion fails.
"""
import time

import numpy as np

from rsvd_rmatrix import algebra as al
from rsvd_rmatrix.dynamics import (
    compact_part, integrate, spectral_drift, trace_drift, verify_lax_equation,
)
from rsvd_rmatrix.lax import (
    Couplings, LaxVariant, PhasePoint, V_vector, hamiltonian, lax_A, lax_variant,
)
from rsvd_rmatrix.poisson import BracketConfig, tensor_bracket_lax, theorem_residual
from rsvd_rmatrix.reduction import (
    momentum_norm, random_K, reduced_hamiltonian, sphere_residuals, upsilon,
)
from rsvd_rmatrix.rmatrix import (
    FAMILIES, FAMILY_VARIANT, commutation_residual, functional_identities,
    lax_pair_B, linear_residual, plain_blocks, quad_coefficients, quad_from_blocks,
    quad_hat, quad_plain, quad_tilde, quadratic_rhs,
)
from rsvd_rmatrix.sampling import random_sample, random_symmetric_tensor

from conftest import ACCEPTANCE_LINES


class Verdict:
    """Collects named bound checks and reports them as one summary line."""

    def __init__(self, cid, title):
        self.cid, self.title = cid, title
        self.items = []
        self.start = time.perf_counter()

    def below(self, name, value, bound):
        self.items.append((name, float(value), "<", bound, value < bound))

    def above(self, name, value, bound):
        self.items.append((name, float(value), ">", bound, value > bound))

    def finish(self, runtime_limit):
        self.below("runtime[s]", time.perf_counter() - self.start, runtime_limit)
        ok = all(item[-1] for item in self.items)
        parts = ", ".join(f"{name}={value:.2e}{op}{bound:g}{'' if flag else ' (VIOLATED)'}"
                          for name, value, op, bound, flag in self.items)
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'} {self.cid:<3s} {self.title}: {parts}")
        failed = [item[:4] for item in self.items if not item[-1]]
        assert ok, f"{self.cid} failed: {failed}"


def seeded(cid):
    return np.random.default_rng([2024, cid])


# -- 1 -------------------------------------------------------------------------

def test_c1_algebra_suite():
    v = Verdict("C1", "basis membership, orthogonality and ad_Lambda law, n = 1..4")
    membership = orthogonality = commutation = 0.0
    rng = seeded(1)
    for n in (1, 2, 3, 4):
        elements = al.basis(n)
        assert len(elements) == (2 * n) ** 2
        stack = al.basis_stack(n)
        membership = max(membership, max(al.algebra_residual(el.matrix) for el in elements))
        gram = np.einsum("aij,bji->ab", stack, stack)
        orthogonality = max(orthogonality, np.max(np.abs(gram - np.diag([el.norm for el in elements]))))
        lam = np.cumsum(rng.uniform(0.2, 2.0, n))[::-1]
        for el in elements:
            got = al.ad_lambda(lam, el.matrix)
            if el.kind == "D":
                want = np.zeros_like(got)
            else:
                partner = "-" if el.sign == "+" else "+"
                want = el.root(lam) * al.x_matrix(n, el.root, partner, el.flavor)
            commutation = max(commutation, np.max(np.abs(got - want)))
    v.below("membership", membership, 1e-13)
    v.below("orthogonality", orthogonality, 1e-13)
    v.below("commutation", commutation, 1e-13)
    v.finish(1.0)


# -- 2 -------------------------------------------------------------------------

def test_c2_lax_suite():
    v = Verdict("C2", "Lax matrix on 100 points per n = 1..3")
    rng = seeded(2)
    herm = group = sphere = trace = 0.0
    min_eig = np.inf
    for n in (1, 2, 3):
        C = al.build_C(n)
        for _ in range(100):
            p, c = random_sample(n, rng)
            A = lax_A(p, c)
            norm = np.linalg.norm(A)
            herm = max(herm, np.linalg.norm(A - A.conj().T) / norm)
            w = np.linalg.eigvalsh(A)
            min_eig = min(min_eig, w[0] / w[-1])
            group = max(group, np.linalg.norm(A.conj().T @ C @ A - C) / norm ** 2)
            sphere = max(sphere, *sphere_residuals(V_vector(p, c)))
            H = hamiltonian(p, c)
            At = lax_variant(p, c, LaxVariant.A_TILDE)
            trace = max(trace, abs(H - 0.5 * np.trace(At).real) / abs(H))
    v.below("hermiticity", herm, 1e-13)
    v.above("min eig/max eig", min_eig, 0.0)
    v.below("group", group, 1e-9)
    v.below("sphere", sphere, 1e-9)
    v.below("trace", trace, 1e-11)
    v.finish(5.0)


# -- 3 -------------------------------------------------------------------------

def test_c3_consistency_conditions():
    v = Verdict("C3", "consistency conditions, 50 points per family, n = 1..3, kappa in {0, 0.7, 1.5}")
    rng = seeded(3)
    worst = {f: 0.0 for f in FAMILIES}
    for n in (1, 2, 3):
        for kappa in (0.0, 0.7, 1.5):
            for _ in range(50):
                p, c = random_sample(n, rng, kappa)
                plain = quad_plain(p, c)
                coefficients = {"plain": plain, "tilde": quad_tilde(p, c, plain), "hat": quad_hat(p, c, plain)}
                for family, q in coefficients.items():
                    worst[family] = max(worst[family], q.consistency_residual())
    for family in FAMILIES:
        v.below(family, worst[family], 1e-10)
    v.finish(10.0)


# -- 4 -------------------------------------------------------------------------

def test_c4_gauge_identities():
    v = Verdict("C4", "functional equations of P, Q and the twelve conjugation relations")
    rng = seeded(4)
    functional = 0.0
    for _ in range(1000):
        x, y = rng.uniform(0.1, 10.0, 2)
        kappa = rng.uniform(0.0, 3.0)
        functional = max(functional, np.max(functional_identities(x, y, kappa)))
    seen, commutation = set(), 0.0
    for _ in range(60):
        n = int(rng.integers(2, 5))
        p, c = random_sample(n, rng, rng.uniform(0.0, 3.0))
        for relation, residual in commutation_residual(p, c).items():
            seen.add(relation)
            commutation = max(commutation, residual)
    v.below("functional", functional, 1e-12)
    v.below("relations", commutation, 1e-12)
    v.above("relations covered", len(seen), 11.5)
    v.finish(2.0)


# -- 5 -------------------------------------------------------------------------

def corrupted_plain(p, c):
    """Plain coefficients with the sign of the root_vee term in b flipped."""
    blocks = plain_blocks(p, c)
    q = quad_from_blocks(blocks)
    return q.replace(b=q.b - 2 * blocks["root_vee"])


def test_c5_bracket_theorems():
    v = Verdict("C5", "FD tensor bracket vs quadratic form, n = 1, 2, 10 points per family")
    rng = seeded(5)
    cfg = BracketConfig()
    worst = {f: 0.0 for f in FAMILIES}
    control = np.inf
    for n in (1, 2):
        for family in FAMILIES:
            for _ in range(10):
                p, c = random_sample(n, rng)
                if family == "plain":
                    c = c.with_kappa(0.0)
                variant = FAMILY_VARIANT[family]
                L = lax_variant(p, c, variant)
                lhs = tensor_bracket_lax(p, c, variant, cfg)
                q = quad_coefficients(p, c, family)
                worst[family] = max(worst[family], theorem_residual(lhs, quadratic_rhs(q, L)))
                bad = corrupted_plain(p, c)
                if family == "tilde":
                    bad = quad_tilde(p, c, bad)
                elif family == "hat":
                    bad = quad_hat(p, c, bad)
                control = min(control, theorem_residual(lhs, quadratic_rhs(bad, L)))
    for family in FAMILIES:
        v.below(family, worst[family], 5e-6)
    v.above("control(min)", control, 1e-2)
    v.finish(60.0)


# -- 6 -------------------------------------------------------------------------

def test_c6_linear_quadratic_equivalence():
    v = Verdict("C6", "linear r-matrix bracket equals the quadratic form, u12 = 0 and random")
    rng = seeded(6)
    worst = {"u=0": 0.0, "u random": 0.0}
    for n in (1, 2, 3):
        for _ in range(20):
            p, c = random_sample(n, rng)
            for family in FAMILIES:
                q = quad_coefficients(p, c, family)
                L = lax_variant(p, c, FAMILY_VARIANT[family])
                worst["u=0"] = max(worst["u=0"], linear_residual(q, L))
                u = random_symmetric_tensor(2 * n, rng)
                worst["u random"] = max(worst["u random"], linear_residual(q, L, u))
    for name, value in worst.items():
        v.below(name, value, 1e-11)
    v.finish(5.0)


# -- 7 -------------------------------------------------------------------------

def test_c7_momentum_map():
    v = Verdict("C7", "momentum map vanishes on 100 lifted points, reduced Hamiltonian at kappa = 0")
    rng = seeded(7)
    J = ham = 0.0
    for k in range(100):
        n = 1 + k % 3
        p, c = random_sample(n, rng)
        e = upsilon(p, c, random_K(n, rng), random_K(n, rng))
        J = max(J, momentum_norm(e))
        c0 = c.with_kappa(0.0)
        H = hamiltonian(p, c0)
        ham = max(ham, abs(reduced_hamiltonian(upsilon(p, c0, random_K(n, rng), random_K(n, rng))) - H) / H)
    v.below("|J|", J, 1e-8)
    v.below("hamiltonian", ham, 1e-11)
    v.finish(5.0)


# -- 8 -------------------------------------------------------------------------

def test_c8_lax_equation():
    v = Verdict("C8", "dA^/dt = [B^, A^] along the flow, n = 1..3, kappa in {0, 1}")
    rng = seeded(8)
    worst, control = 0.0, np.inf
    for n in (1, 2, 3):
        for kappa in (0.0, 1.0):
            for _ in range(5):
                p, c = random_sample(n, rng, kappa)
                worst = max(worst, verify_lax_equation(p, c).records[0].residual)
                if kappa > 0:
                    wrong = compact_part(lax_pair_B(p, c))
                    control = min(control, verify_lax_equation(p, c, B=wrong).records[0].residual)
    v.below("residual", worst, 1e-5)
    v.above("control(min)", control, 1e-2)
    v.finish(30.0)


# -- 9 -------------------------------------------------------------------------

FLOW_POINTS = {
    2: (PhasePoint([3.0, 1.5], [0.4, -0.3]), Couplings(-0.8, 1.0, 0.5)),
    3: (PhasePoint([5.0, 3.0, 1.5], [0.3, -0.2, 0.1]), Couplings(-0.8, 1.0, 0.5)),
}


def test_c9_isospectral_flow():
    v = Verdict("C9", "RK4 to t = 10 at kappa = 0.5: conservation and order 4")
    for n, (p, c) in FLOW_POINTS.items():
        runs = {dt: integrate(p, c, 10.0, dt) for dt in (4e-3, 2e-3, 1e-3)}
        traj = runs[1e-3]
        v.below(f"n={n} energy", traj.energy_drift(), 1e-9)
        v.below(f"n={n} spectrum", spectral_drift(traj, LaxVariant.A_HAT), 1e-8)
        v.below(f"n={n} traces", trace_drift(traj, LaxVariant.A_HAT), 1e-8)
        finals = [runs[dt].final.as_vector() for dt in (4e-3, 2e-3, 1e-3)]
        order = np.log2(np.linalg.norm(finals[0] - finals[1]) / np.linalg.norm(finals[1] - finals[2]))
        v.above(f"n={n} order", order, 3.8)
        v.below(f"n={n} order", order, 4.2)
    v.finish(60.0)


# -- 10 ------------------------------------------------------------------------

def test_c10_zero_kappa_degeneration():
    v = Verdict("C10", "at kappa = 0 every family and Lax variant reduces to the plain one")
    rng = seeded(10)
    coefficients = variants = 0.0
    for n in (1, 2, 3):
        for _ in range(5):
            p, c = random_sample(n, rng, 0.0)
            plain = quad_plain(p, c)
            for q in (quad_tilde(p, c, plain), quad_hat(p, c, plain)):
                for name in "abcd":
                    coefficients = max(coefficients, np.max(np.abs(getattr(q, name) - getattr(plain, name))))
            A = lax_A(p, c)
            for variant in LaxVariant:
                variants = max(variants, np.max(np.abs(lax_variant(p, c, variant) - A)))
    v.below("coefficients", coefficients, 1e-12)
    v.below("variants", variants, 1e-12)
    v.finish(1.0)
