"""Exception hierarchy shared by all modules."""


class RSvDError(Exception):
    """Base class for every error raised by this package."""


class DomainError(RSvDError, ValueError):
    """An argument lies outside the subspace an operation is defined on."""


class MembershipError(DomainError):
    """A matrix fails a group or Lie algebra membership test."""


class RegularityError(DomainError):
    """A root value is too close to zero for the restricted inverse of ad."""


class CouplingError(RSvDError, ValueError):
    """Coupling constants violate mu < 0 < nu, nu*kappa >= 0."""


class ChamberError(RSvDError, ValueError):
    """A configuration left the open Weyl chamber lambda_1 > ... > lambda_n > 0.

    When raised from an integration the partially computed trajectory is
    attached as ``trajectory`` (``None`` otherwise).
    """

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class SymmetryError(DomainError):
    """A tensor expected to be swap-symmetric is not."""


class SphereError(DomainError):
    """A vector does not lie on the sphere C V + V = 0, V* V = N."""


class CalibrationError(RSvDError, RuntimeError):
    """Neither bracket orientation reproduces the quadratic bracket."""
