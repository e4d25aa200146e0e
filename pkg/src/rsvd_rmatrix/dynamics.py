"""Hamiltonian flow, isospectrality and the Lax equation along trajectories."""
import csv
from dataclasses import dataclass, field

import numpy as np

from .algebra import cartan_split
from .errors import ChamberError, DomainError
from .lax import (
    MIN_GAP, LaxVariant, PhasePoint, check_chamber, energy_weights, hamiltonian, lax_variant,
)
from .poisson import CALIBRATED_SIGN, BracketConfig, gradient
from .report import CheckRecord, VerificationReport, point_dict
from .rmatrix import lax_pair_B

#: imaginary parts of Lax eigenvalues below this (relative) are discarded
IMAG_TOL = 1e-10


def _dlog(y, a2):
    """d/dy of log sqrt(1 + a2 / y^2)."""
    return -a2 / (y * (y * y + a2))


def _log_weight_jacobian(lam, c):
    """J[c, j] = d log W_c / d lambda_j for the energy weights W_c."""
    lam = np.asarray(lam, dtype=float)
    mu2 = 4 * c.mu ** 2
    J = np.diag(_dlog(lam, c.nu ** 2) + _dlog(lam, c.kappa ** 2))
    if lam.size > 1:
        diff = lam[:, None] - lam[None, :]
        np.fill_diagonal(diff, np.inf)
        minus = _dlog(diff, mu2)
        plus = _dlog(lam[:, None] + lam[None, :], mu2)
        np.fill_diagonal(plus, 0.0)
        J += np.diag(minus.sum(axis=1) + plus.sum(axis=1)) - minus + plus
    return J


def hamiltonian_gradient(p, c):
    """Analytic (dH/dlambda, dH/dtheta)."""
    return _gradient(p.lam, p.theta, c)


def _gradient(lam, theta, c):
    w = energy_weights(lam, c)
    dtheta = 2 * np.sinh(2 * theta) * w
    dlam = (np.cosh(2 * theta) * w) @ _log_weight_jacobian(lam, c)
    if c.kappa != 0.0:
        mu2 = 4 * c.mu ** 2
        prod = np.prod(1 + mu2 / lam ** 2)
        dlam = dlam + c.nu * c.kappa / mu2 * prod * (-2 * mu2 / (lam * (lam ** 2 + mu2)))
    return dlam, dtheta


def hamilton_equations(p, c, sign=CALIBRATED_SIGN):
    """(dlambda/dt, dtheta/dt) from the analytic gradient of H."""
    dlam, dtheta = hamiltonian_gradient(p, c)
    return sign * 0.5 * dtheta, -sign * 0.5 * dlam


def flow_rhs(p, c, cfg=None):
    """(dlambda/dt, dtheta/dt) = ({lambda, H}, {theta, H}) with H differentiated numerically."""
    cfg = cfg or BracketConfig()
    dlam, dtheta = gradient(hamiltonian, p, c, cfg)
    return cfg.sign * 0.5 * np.array(dtheta), -cfg.sign * 0.5 * np.array(dlam)


@dataclass
class Trajectory:
    times: np.ndarray
    states: list
    couplings: object
    method: str = "rk4"
    dt: float = None
    sign: int = CALIBRATED_SIGN
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.states)

    @property
    def lam(self):
        return np.array([s.lam for s in self.states])

    @property
    def theta(self):
        return np.array([s.theta for s in self.states])

    @property
    def final(self):
        return self.states[-1]

    def energies(self):
        return np.array([hamiltonian(s, self.couplings) for s in self.states])

    def energy_drift(self):
        H = self.energies()
        return float(np.max(np.abs(H - H[0])) / (1 + abs(H[0])))

    def to_csv(self, path, v=LaxVariant.A_HAT):
        n = self.states[0].n
        H = self.energies()
        drift = spectral_drift_series(self, v)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t"] + [f"lambda_{k + 1}" for k in range(n)]
                       + [f"theta_{k + 1}" for k in range(n)] + ["H", "drift"])
            for t, s, e, d in zip(self.times, self.states, H, drift):
                w.writerow([repr(float(x)) for x in (t, *s.lam, *s.theta, e, d)])


def _derivative(y, c, sign, min_gap):
    n = y.size // 2
    lam = check_chamber(y[:n], min_gap)
    dlam, dtheta = _gradient(lam, y[n:], c)
    return np.concatenate([sign * 0.5 * dtheta, -sign * 0.5 * dlam])


def rk4_step(y, h, c, sign=CALIBRATED_SIGN, min_gap=None):
    """One classical RK4 step of Hamilton's equations (h may be negative)."""
    g = MIN_GAP if min_gap is None else min_gap
    k1 = _derivative(y, c, sign, g)
    k2 = _derivative(y + h / 2 * k1, c, sign, g)
    k3 = _derivative(y + h / 2 * k2, c, sign, g)
    k4 = _derivative(y + h * k3, c, sign, g)
    return y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def integrate(p0, c, t_end, dt, sign=CALIBRATED_SIGN):
    """Fixed-step RK4 from p0 up to t_end, recording every step.

    A shorter final step lands exactly on t_end.  If any stage leaves the
    chamber a ChamberError carrying the partial trajectory is raised.
    """
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if t_end < 0:
        raise ValueError(f"t_end must be nonnegative, got {t_end}")
    times, states = [0.0], [p0]
    y, t = p0.as_vector(), 0.0
    steps = int(np.floor(t_end / dt + 1e-9))
    grid = [dt] * steps
    rest = t_end - steps * dt
    if rest > 1e-12 * max(1.0, t_end):
        grid.append(rest)
    for k, h in enumerate(grid):
        try:
            y = rk4_step(y, h, c, sign, p0.min_gap)
            state = PhasePoint.from_vector(y, p0.min_gap)
        except ChamberError as exc:
            partial = Trajectory(np.array(times), states, c, dt=dt, sign=sign)
            raise ChamberError(f"trajectory left the chamber near t={t + h:.6g}: {exc}",
                               trajectory=partial) from exc
        t = (k + 1) * dt if k < steps else t_end
        times.append(t)
        states.append(state)
    return Trajectory(np.array(times), states, c, dt=dt, sign=sign)


def spectrum(L):
    """Eigenvalues sorted by real part; rejects non-negligible imaginary parts."""
    w = np.linalg.eigvals(L)
    scale = max(1.0, np.max(np.abs(w)))
    if np.max(np.abs(w.imag)) > IMAG_TOL * scale:
        raise DomainError(f"Lax spectrum is not real: max |Im| = {np.max(np.abs(w.imag)):.3e}")
    return np.sort(w.real)


def spectral_drift_series(traj, v=LaxVariant.A_HAT):
    c = traj.couplings
    ref = spectrum(lax_variant(traj.states[0], c, v))
    scale = np.max(np.abs(ref))
    return np.array([np.max(np.abs(spectrum(lax_variant(s, c, v)) - ref)) / scale
                     for s in traj.states])


def spectral_drift(traj, v=LaxVariant.A_HAT):
    """Largest relative deviation of the sorted spectrum from its initial value."""
    return float(np.max(spectral_drift_series(traj, v)))


def trace_invariants(p, c, v=LaxVariant.A_HAT):
    """tr(L^k) for k = 1..N."""
    L = lax_variant(p, c, v)
    out, M = [], np.eye(L.shape[0])
    for _ in range(L.shape[0]):
        M = M @ L
        out.append(np.trace(M))
    return np.array(out)


def trace_drift(traj, v=LaxVariant.A_HAT):
    """Largest relative change of any tr(L^k) along the trajectory."""
    c = traj.couplings
    ref = trace_invariants(traj.states[0], c, v)
    return float(max(np.max(np.abs(trace_invariants(s, c, v) - ref) / np.abs(ref))
                     for s in traj.states))


def time_scale(p, c, sign=CALIBRATED_SIGN):
    """A crude local time scale: configuration scale over phase-space speed."""
    speed = np.max(np.abs(np.concatenate(hamilton_equations(p, c, sign))))
    return min(1.0, min_gap(p)) / max(speed, 1e-300)


def flow_derivative(p, c, v=LaxVariant.A_HAT, delta=None, sign=CALIBRATED_SIGN):
    """dL/dt along the flow from short forward and backward RK4 integrations.

    Central differences at delta and delta/2 combined by one Richardson step.
    By default delta is 1e-3 local time scales (capped at 1e-3).
    """
    if delta is None:
        delta = 1e-3 * min(1.0, time_scale(p, c, sign))
    y0 = p.as_vector()

    def at(h):
        return lax_variant(PhasePoint.from_vector(rk4_step(y0, h, c, sign, p.min_gap), p.min_gap), c, v)

    def central(h):
        return (at(h) - at(-h)) / (2 * h)

    return (4 * central(delta / 2) - central(delta)) / 3


def verify_lax_equation(p, c, cfg=None, delta=None, B=None, tolerance=1e-5):
    """Compare dA^/dt along the flow with [B^, A^]; ``B`` overrides B^ for controls."""
    cfg = cfg or BracketConfig()
    Ahat = lax_variant(p, c, LaxVariant.A_HAT)
    B = lax_pair_B(p, c) if B is None else B
    lhs = flow_derivative(p, c, LaxVariant.A_HAT, delta, cfg.sign)
    rhs = B @ Ahat - Ahat @ B
    residual = float(np.linalg.norm(lhs - rhs) / np.linalg.norm(lhs))
    report = VerificationReport(bracket_sign=cfg.sign)
    report.add(CheckRecord(
        check_id="laxpair.equation",
        anchor="Lax equation dA^/dt = [B^, A^]",
        residual=residual, tolerance=tolerance, family="hat", n=p.n,
        point=point_dict(p, c), details={"delta": delta if delta is not None else "auto"},
    ))
    return report


def compact_part(B):
    """The k-component of B, used as a deliberately wrong Lax partner."""
    return cartan_split(B)[0]


def min_gap(p):
    return float(np.min(np.append(-np.diff(p.lam), p.lam[-1])))
