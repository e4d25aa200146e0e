"""Verification suites run by the command-line front end.

Each suite takes a :class:`Campaign` and returns a list of CheckRecords.  Every
suite draws from its own generator seeded by (campaign seed, suite name), so a
suite gives the same records whether it runs alone or with the others.
"""
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import algebra as al
from .dynamics import compact_part, verify_lax_equation
from .lax import (
    LaxVariant, V_vector, h_matrix, h_inverse, hamiltonian, lax_A, lax_variant,
)
from .poisson import BracketConfig, verify_theorem
from .reduction import (
    momentum_norm, random_K, reduced_hamiltonian, sphere_residuals, upsilon,
)
from .report import CheckRecord, point_dict
from .rmatrix import (
    FAMILIES, FAMILY_VARIANT, commutation_residual, functional_identities,
    lax_pair_B, lax_pair_B_from_rmatrix, linear_residual, quad_coefficients,
)
from .sampling import random_lambda, random_sample, random_symmetric_tensor


@dataclass
class Campaign:
    n: int = 2
    count: int = 20
    seed: int = 0
    families: tuple = FAMILIES
    tol: float = None
    cfg: BracketConfig = field(default_factory=BracketConfig)

    def tolerance(self, default):
        return default if self.tol is None else self.tol

    def rng(self, suite):
        return np.random.default_rng([self.seed, zlib.crc32(suite.encode())])

    def samples(self, suite, kappa=None):
        rng = self.rng(suite)
        return [random_sample(self.n, rng, kappa) for _ in range(self.count)], rng


def _record(campaign, check_id, anchor, residual, tolerance, p=None, c=None, family=None, **details):
    return CheckRecord(
        check_id=check_id, anchor=anchor, residual=float(residual),
        tolerance=campaign.tolerance(tolerance), family=family, n=campaign.n,
        point=None if p is None else point_dict(p, c), details=details,
    )


#: negative controls are only meaningful where kappa moves B^ away from k
CONTROL_KAPPA = 0.5


def suite_algebra(campaign):
    n = campaign.n
    rng = campaign.rng("algebra")
    elements = al.basis(n)
    stack = al.basis_stack(n)
    membership = max(al.algebra_residual(el.matrix) for el in elements)
    gram = np.einsum("aij,bji->ab", stack, stack)
    signature = np.diag([el.norm for el in elements])
    real = np.concatenate([stack.real.reshape(len(elements), -1),
                           stack.imag.reshape(len(elements), -1)], axis=1)
    rank_defect = len(elements) - np.linalg.matrix_rank(real)
    lam = random_lambda(n, rng)
    ad = 0.0
    for el in elements:
        got = al.ad_lambda(lam, el.matrix)
        if el.kind == "D":
            want = np.zeros_like(got)
        else:
            partner = "-" if el.sign == "+" else "+"
            want = el.root(lam) * al.x_matrix(n, el.root, partner, el.flavor)
        ad = max(ad, np.max(np.abs(got - want)))
    return [
        _record(campaign, "algebra.membership", "basis lies in u(n,n)", membership, 1e-13),
        _record(campaign, "algebra.orthogonality", "signed trace-form orthogonality",
                np.max(np.abs(gram - signature)), 1e-13),
        _record(campaign, "algebra.rank", "basis has full real rank", rank_defect, 0.5),
        _record(campaign, "algebra.commutation", "ad_Lambda on the root basis", ad, 1e-13,
                **{"lambda": lam.tolist()}),
    ]


def suite_lax(campaign):
    records = []
    samples, _ = campaign.samples("lax")
    C = al.build_C(campaign.n)
    for p, c in samples:
        A = lax_A(p, c)
        w = np.linalg.eigvalsh(A)
        norm = np.linalg.norm(A)
        At = lax_variant(p, c, LaxVariant.A_TILDE)
        H = hamiltonian(p, c)
        h, hi = h_matrix(p, c), h_inverse(p, c)
        gauge = max(
            np.linalg.norm(h @ At @ h - A) / norm,
            np.linalg.norm(h @ At @ hi - lax_variant(p, c, LaxVariant.A_HAT)) / norm,
            np.linalg.norm(hi @ At @ h - lax_variant(p, c, LaxVariant.A_CHECK)) / norm,
        )
        records += [
            _record(campaign, "lax.hermitian", "A is Hermitian", np.linalg.norm(A - A.conj().T) / norm, 1e-13, p, c),
            _record(campaign, "lax.positive", "A is positive definite", 0.0 if w[0] > 0 else 1.0, 0.5, p, c,
                    min_eigenvalue=w[0]),
            _record(campaign, "lax.group", "A lies in U(n,n)",
                    np.linalg.norm(A.conj().T @ C @ A - C) / norm ** 2, 1e-9, p, c),
            _record(campaign, "lax.sphere", "V lies on the sphere", max(sphere_residuals(V_vector(p, c))), 1e-9, p, c),
            _record(campaign, "lax.trace", "H equals half the trace of A~",
                    abs(H - 0.5 * np.trace(At).real) / (1 + abs(H)), 1e-11, p, c),
            _record(campaign, "lax.gauge", "gauge coherence of the Lax variants", gauge, 1e-12, p, c),
        ]
    return records


def suite_consistency(campaign):
    records = []
    samples, _ = campaign.samples("consistency")
    for p, c in samples:
        for family in campaign.families:
            q = quad_coefficients(p, c, family)
            records.append(_record(campaign, "consistency", f"consistency conditions ({family})",
                                   q.consistency_residual(), 1e-10, p, c, family))
    return records


def suite_commutation(campaign):
    records = []
    samples, _ = campaign.samples("commutation")
    for p, c in samples:
        for relation, residual in commutation_residual(p, c).items():
            records.append(_record(campaign, f"commutation.{relation}",
                                   "conjugation by the gauge matrix H", residual, 1e-12, p, c))
    return records


def suite_functional(campaign):
    records = []
    rng = campaign.rng("functional")
    for _ in range(campaign.count):
        x, y = rng.uniform(0.2, 5.0, 2)
        kappa = rng.uniform(0.0, 2.0)
        for k, residual in enumerate(functional_identities(x, y, kappa), 1):
            records.append(CheckRecord(
                check_id=f"functional.{k}", anchor="functional equation of P and Q",
                residual=float(residual), tolerance=campaign.tolerance(1e-12),
                point={"x": x, "y": y, "kappa": kappa}))
    return records


def suite_momentum(campaign):
    records = []
    samples, rng = campaign.samples("momentum")
    for p, c in samples:
        e = upsilon(p, c, random_K(p.n, rng), random_K(p.n, rng))
        scale = 1 + np.linalg.norm(lax_A(p, c))
        c0 = c.with_kappa(0.0)
        H = hamiltonian(p, c0)
        records += [
            _record(campaign, "momentum.zero", "momentum map vanishes on the image of Upsilon",
                    momentum_norm(e) / scale, 1e-8, p, c),
            _record(campaign, "momentum.hamiltonian", "reduced Hamiltonian at kappa = 0",
                    abs(reduced_hamiltonian(upsilon(p, c0)) - H) / (1 + abs(H)), 1e-11, p, c0),
        ]
    return records


def suite_linear(campaign):
    records = []
    samples, rng = campaign.samples("linear")
    for p, c in samples:
        for family in campaign.families:
            q = quad_coefficients(p, c, family)
            L = lax_variant(p, c, FAMILY_VARIANT[family])
            worst = max(linear_residual(q, L, u) for u in (None, random_symmetric_tensor(L.shape[0], rng)))
            records.append(_record(campaign, "linear", f"linear r-matrix form ({family})",
                                   worst, 1e-11, p, c, family))
    return records


def suite_theorem(campaign):
    records = []
    samples, _ = campaign.samples("theorem")
    cfg = campaign.cfg if campaign.tol is None else campaign.cfg.replace(tolerance=campaign.tol)
    for p, c in samples:
        for family in campaign.families:
            records += verify_theorem(p, c, family, cfg).records
    return records


def suite_laxpair(campaign):
    records = []
    samples, _ = campaign.samples("laxpair")
    for p, c in samples:
        B = lax_pair_B(p, c)
        rec = verify_lax_equation(p, c, campaign.cfg, tolerance=campaign.tolerance(1e-5)).records[0]
        records += [
            rec,
            _record(campaign, "laxpair.partial_trace", "B^ from the partial trace of the r-matrix",
                    np.linalg.norm(B - lax_pair_B_from_rmatrix(p, c)) / (1 + np.linalg.norm(B)), 1e-10, p, c),
            _record(campaign, "laxpair.membership", "B^ lies in u(n,n)",
                    al.algebra_residual(B) / (1 + np.linalg.norm(B)), 1e-10, p, c),
        ]
        if c.kappa >= CONTROL_KAPPA:
            control = verify_lax_equation(p, c, campaign.cfg, B=compact_part(B)).records[0]
            # a lower bound, so --tol does not apply
            records.append(CheckRecord(
                check_id="laxpair.control", anchor="k-part of B^ alone must fail",
                residual=control.residual, tolerance=1e-2, family="hat", n=p.n,
                point=point_dict(p, c), bound="lower"))
    return records


SUITES = {
    "algebra": suite_algebra,
    "lax": suite_lax,
    "consistency": suite_consistency,
    "commutation": suite_commutation,
    "functional": suite_functional,
    "momentum": suite_momentum,
    "linear": suite_linear,
    "theorem": suite_theorem,
    "laxpair": suite_laxpair,
}


def run_suites(campaign, names=None, jobs=1):
    """Run the named suites (all by default) and return records in suite order."""
    names = list(SUITES) if names is None else list(names)
    unknown = [s for s in names if s not in SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s) {unknown}; available: {sorted(SUITES)}")
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda s: SUITES[s](campaign), names))
    else:
        results = [SUITES[s](campaign) for s in names]
    return [r for chunk in results for r in chunk]
