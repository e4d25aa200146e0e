"""Fix the orientation of the Poisson bracket on a single particle.

The symplectic form only pins |{lambda, theta}| = 1/2.  The sign is chosen
by asking which orientation makes the finite-difference bracket of the
2 x 2 Lax matrix agree with its quadratic r-matrix form.
"""
import numpy as np

from rsvd_rmatrix.lax import LaxVariant, lax_A
from rsvd_rmatrix.poisson import BracketConfig, calibrate, calibration_point, tensor_bracket_lax
from rsvd_rmatrix.rmatrix import quad_plain, quadratic_rhs

p, c = calibration_point()
print("point:", p.lam, p.theta, "couplings:", c)

A = lax_A(p, c)
print("Lax matrix:\n", np.round(A, 6))
print("eigenvalues:", np.linalg.eigvalsh(A), " (they pair as w, 1/w)")

# the r-matrix side does not depend on the orientation
rhs = quadratic_rhs(quad_plain(p, c), A)

for sign in (1, -1):
    lhs = tensor_bracket_lax(p, c, LaxVariant.A, BracketConfig(sign=sign))
    residual = np.linalg.norm(lhs - rhs) / (1 + np.linalg.norm(rhs))
    print(f"sign {sign:+d}: relative residual {residual:.3e}")

# the same comparison, packaged
result = calibrate()
print(f"calibrated sign {result['sign']:+d}, separation factor {result['gap']:.1e}")
