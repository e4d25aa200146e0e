"""Lifting a reduced state to the extended phase space.

Upsilon sends (lambda, theta) and two elements of K to a triple (y, Y, rho).
The momentum map vanishes there, and at kappa = 0 the free Hamiltonian
tr(y y*) / 2 reproduces the particle energy.
"""
import numpy as np

from rsvd_rmatrix.lax import V_vector, hamiltonian
from rsvd_rmatrix.reduction import (
    momentum_norm, orbit_spectrum, random_K, reduced_hamiltonian, sphere_residuals, upsilon,
)
from rsvd_rmatrix.sampling import random_sample

rng = np.random.default_rng(3)
p, c = random_sample(3, rng, kappa=0.0)

V = V_vector(p, c)
print("sphere residuals of V:", sphere_residuals(V))
print("spectrum of -i xi(V):", np.round(orbit_spectrum(V, c), 10))

for trial in range(3):
    e = upsilon(p, c, random_K(3, rng), random_K(3, rng))
    print(f"lift {trial}: |J| = {momentum_norm(e):.2e}, "
          f"tr(y y*)/2 = {reduced_hamiltonian(e):.12f}")
print(f"particle energy H      = {hamiltonian(p, c):.12f}")
