"""Three particles scattering: the Lax spectrum does not move.

The particles start spread out with small rapidities and are integrated to
t = 10 with RK4.  Positions and rapidities change a lot; the energy and the
eigenvalues of the gauged Lax matrix stay put to rounding level.
"""
import numpy as np

from rsvd_rmatrix.dynamics import integrate, spectral_drift, spectrum, trace_drift
from rsvd_rmatrix.lax import Couplings, LaxVariant, PhasePoint, lax_variant

p0 = PhasePoint([5.0, 3.0, 1.5], [0.3, -0.2, 0.1])
c = Couplings(-0.8, 1.0, 0.5)
traj = integrate(p0, c, 10.0, 1e-3)

for k in range(0, len(traj), 2000):
    s = traj.states[k]
    print(f"t={traj.times[k]:5.1f}  lambda={np.round(s.lam, 4)}  theta={np.round(s.theta, 4)}")

print("\nspectrum of A^ at t=0 :", spectrum(lax_variant(traj.states[0], c, LaxVariant.A_HAT)))
print("spectrum of A^ at t=10:", spectrum(lax_variant(traj.final, c, LaxVariant.A_HAT)))
print(f"energy drift   {traj.energy_drift():.2e}")
print(f"spectral drift {spectral_drift(traj):.2e}")
print(f"trace drift    {trace_drift(traj):.2e}")

# the ungauged matrix is not conserved once kappa is switched on
print(f"drift of A itself {spectral_drift(traj, LaxVariant.A):.2e}")

# fourth-order convergence from successive step halvings
finals = [integrate(p0, c, 10.0, dt).final.as_vector() for dt in (4e-3, 2e-3)] + [traj.final.as_vector()]
ratio = np.linalg.norm(finals[0] - finals[1]) / np.linalg.norm(finals[1] - finals[2])
print(f"observed order {np.log2(ratio):.2f}")
