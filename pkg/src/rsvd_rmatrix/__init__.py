"""Numerical toolkit for the r-matrix structure of the rational BC_n
Ruijsenaars-Schneider-van Diejen many-body model."""
__version__ = "0.1.0"

from .errors import (
    CalibrationError, ChamberError, CouplingError, DomainError, MembershipError,
    RegularityError, RSvDError, SphereError, SymmetryError,
)
from .lax import Couplings, LaxVariant, PhasePoint, hamiltonian, lax_A, lax_variant
