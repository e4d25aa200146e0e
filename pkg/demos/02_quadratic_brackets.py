"""The three quadratic r-matrix structures, checked against finite differences.

For a random two-particle configuration the tensor bracket {L (x), L} of each
Lax matrix is computed numerically and compared with
a L1 L2 + L1 b L2 - L2 c L1 - L1 L2 d.  Flipping one sign inside b shows what a
wrong structure looks like.
"""
import numpy as np

from rsvd_rmatrix.lax import lax_variant
from rsvd_rmatrix.poisson import tensor_bracket_lax, theorem_residual
from rsvd_rmatrix.rmatrix import (
    FAMILY_VARIANT, plain_blocks, quad_coefficients, quad_from_blocks, quad_hat, quad_tilde,
    quadratic_rhs,
)
from rsvd_rmatrix.sampling import random_sample

rng = np.random.default_rng(7)
p, c = random_sample(2, rng, kappa=1.0)
print("lambda =", p.lam, " theta =", p.theta)
print("mu, nu, kappa =", c.mu, c.nu, c.kappa)

blocks = plain_blocks(p, c)
good = quad_from_blocks(blocks)
bad = good.replace(b=good.b - 2 * blocks["root_vee"])

print(f"\n{'family':8s} {'consistency':>12s} {'bracket':>10s} {'flipped b':>10s}")
for family, variant in FAMILY_VARIANT.items():
    cc = c.with_kappa(0.0) if family == "plain" else c
    q = quad_coefficients(p, cc, family)
    wrong = {"plain": bad, "tilde": quad_tilde(p, cc, bad), "hat": quad_hat(p, cc, bad)}[family]
    L = lax_variant(p, cc, variant)
    lhs = tensor_bracket_lax(p, cc, variant)
    print(f"{family:8s} {q.consistency_residual():12.2e} "
          f"{theorem_residual(lhs, quadratic_rhs(q, L)):10.2e} "
          f"{theorem_residual(lhs, quadratic_rhs(wrong, L)):10.2e}")
