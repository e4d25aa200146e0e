"""Finite-difference Poisson brackets on the reduced phase space.

The symplectic form 2 sum_c d theta_c ^ d lambda_c gives |{lambda_c, theta_c}| = 1/2.
Its orientation is fixed once by :func:`calibrate`, which compares the
quadratic bracket of the C_n Lax matrix against both signs at n = 1; the
winner is stored as :data:`CALIBRATED_SIGN`.
"""
from dataclasses import dataclass, replace

import numpy as np

from .errors import CalibrationError, ChamberError
from .lax import Couplings, LaxVariant, PhasePoint, check_chamber, lax_variant
from .report import CheckRecord, VerificationReport, point_dict
from .rmatrix import FAMILY_VARIANT, quad_coefficients, quadratic_rhs

#: bracket orientation: {f, g} = sign / 2 * sum(df/dlam dg/dtheta - df/dtheta dg/dlam)
CALIBRATED_SIGN = -1
#: number of times a stencil step is halved before giving up near a chamber wall
MAX_SHRINK = 8


@dataclass(frozen=True)
class BracketConfig:
    fd_step: float = 1e-5
    richardson: bool = True
    sign: int = CALIBRATED_SIGN
    tolerance: float = 5e-6

    def __post_init__(self):
        if not self.fd_step > 0:
            raise ValueError(f"fd_step must be positive, got {self.fd_step}")
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")

    def replace(self, **changes):
        return replace(self, **changes)


def _shifted(p, k, delta):
    y = p.as_vector()
    y[k] += delta
    return y


def _lambda_step(p, k, h):
    """Largest step <= h (halving) keeping lambda +- h inside the chamber."""
    for _ in range(MAX_SHRINK + 1):
        try:
            check_chamber(_shifted(p, k, h)[:p.n], p.min_gap)
            check_chamber(_shifted(p, k, -h)[:p.n], p.min_gap)
            return h
        except ChamberError:
            h /= 2
    raise ChamberError(f"finite-difference stencil around lambda={p.lam} leaves the chamber")


def gradient(f, p, c, cfg=None):
    """(df/dlambda, df/dtheta) of a scalar- or array-valued f(p, c).

    Each returned sequence has one entry per coordinate, shaped like f.
    Central differences with step fd_step * (1 + |x|), optionally followed by
    one Richardson level (4 D(h/2) - D(h)) / 3.
    """
    cfg = cfg or BracketConfig()
    n = p.n
    out = []
    for k in range(2 * n):
        x = p.as_vector()[k]
        h = cfg.fd_step * (1 + abs(x))
        if k < n:
            h = _lambda_step(p, k, h)

        def central(step):
            fp = np.asarray(f(PhasePoint.from_vector(_shifted(p, k, step), p.min_gap), c))
            fm = np.asarray(f(PhasePoint.from_vector(_shifted(p, k, -step), p.min_gap), c))
            return (fp - fm) / (2 * step)

        d = central(h)
        if cfg.richardson:
            d = (4 * central(h / 2) - d) / 3
        out.append(d)
    return out[:n], out[n:]


def bracket(f, g, p, c, cfg=None):
    """{f, g}(p) for scalar functions f(p, c), g(p, c)."""
    cfg = cfg or BracketConfig()
    fl, ft = gradient(f, p, c, cfg)
    gl, gt = gradient(g, p, c, cfg)
    total = sum(fl[k] * gt[k] - ft[k] * gl[k] for k in range(p.n))
    return cfg.sign * 0.5 * total


def lax_gradient(p, c, v, cfg=None):
    """FD derivatives of one Lax variant, from a single 4n-point stencil per level."""
    v = LaxVariant(v)
    return gradient(lambda q, cc: lax_variant(q, cc, v), p, c, cfg)


def tensor_bracket_from_gradient(dl, dt, sign):
    """sign / 2 * sum_c (dL/dlam_c (x) dL/dtheta_c - dL/dtheta_c (x) dL/dlam_c)."""
    T = sum(np.kron(a, b) - np.kron(b, a) for a, b in zip(dl, dt))
    return sign * 0.5 * T


def tensor_bracket_lax(p, c, v=LaxVariant.A, cfg=None):
    """The N^2 x N^2 matrix of brackets {L_ij, L_kl} in Kronecker layout."""
    cfg = cfg or BracketConfig()
    dl, dt = lax_gradient(p, c, v, cfg)
    return tensor_bracket_from_gradient(dl, dt, cfg.sign)


def theorem_residual(lhs, rhs):
    return float(np.linalg.norm(lhs - rhs) / (1.0 + np.linalg.norm(rhs)))


def verify_theorem(p, c, family="plain", cfg=None, coefficients=None):
    """Compare the FD tensor bracket of a Lax variant with its quadratic r-matrix form.

    ``family`` pairs plain with A (kappa forced to 0), tilde with A~ and hat
    with A^.  ``coefficients`` may override the computed QuadCoefficients,
    which is how mutation controls are run.  A report is returned whether or
    not the check passes.
    """
    cfg = cfg or BracketConfig()
    if family == "plain":
        c = c.with_kappa(0.0)
    v = FAMILY_VARIANT[family]
    q = quad_coefficients(p, c, family) if coefficients is None else coefficients
    L = lax_variant(p, c, v)
    lhs = tensor_bracket_lax(p, c, v, cfg)
    rhs = quadratic_rhs(q, L)
    residual = theorem_residual(lhs, rhs)
    report = VerificationReport(bracket_sign=cfg.sign)
    report.add(CheckRecord(
        check_id=f"theorem.{family}",
        anchor=f"quadratic bracket of {v.value}",
        residual=residual,
        tolerance=cfg.tolerance,
        family=family,
        n=p.n,
        point=point_dict(p, c),
        details={"fd_step": cfg.fd_step, "richardson": cfg.richardson},
    ))
    return report


def calibration_point():
    """Fixed n = 1 test point used to settle the bracket orientation."""
    return PhasePoint([1.3], [0.4]), Couplings(-0.7, 0.9, 0.0)


def calibrate(cfg=None, point=None, threshold=1e-4):
    """Evaluate the n = 1 plain-family residual for both signs and pick the winner.

    Returns a dict with both residuals and the winning sign.  Raises
    CalibrationError unless exactly one sign gets below ``threshold``.
    """
    cfg = cfg or BracketConfig()
    p, c = point or calibration_point()
    residuals = {}
    for sign in (1, -1):
        report = verify_theorem(p, c, "plain", cfg.replace(sign=sign))
        residuals[sign] = report.records[0].residual
    winners = [s for s, r in residuals.items() if r < threshold]
    if len(winners) != 1:
        raise CalibrationError(f"sign calibration is ambiguous: residuals {residuals}")
    sign = winners[0]
    return {
        "sign": sign,
        "residual_plus": residuals[1],
        "residual_minus": residuals[-1],
        "gap": residuals[-sign] / max(residuals[sign], np.finfo(float).tiny),
        "point": point_dict(p, c),
    }
