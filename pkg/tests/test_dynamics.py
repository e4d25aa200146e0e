import csv

import numpy as np
import pytest

from rsvd_rmatrix.dynamics import (
    Trajectory, compact_part, flow_derivative, integrate, min_gap, rk4_step,
    spectral_drift, spectrum, time_scale, trace_drift, trace_invariants,
    verify_lax_equation,
)
from rsvd_rmatrix.errors import ChamberError, DomainError
from rsvd_rmatrix.lax import Couplings, LaxVariant, PhasePoint, hamiltonian, lax_variant
from rsvd_rmatrix.rmatrix import lax_pair_B
from rsvd_rmatrix.sampling import SIMULATION_THETA_RANGE, random_point

GENTLE = (PhasePoint([3.0, 1.5], [0.4, -0.3]), Couplings(-0.8, 1.0, 0.5))


def test_integrate_grid_and_final_step():
    p, c = GENTLE
    traj = integrate(p, c, 0.0105, 1e-3)
    assert len(traj) == 12
    assert traj.times[-1] == pytest.approx(0.0105, abs=1e-15)
    assert np.allclose(np.diff(traj.times)[:-1], 1e-3)


def test_integrate_zero_time():
    p, c = GENTLE
    traj = integrate(p, c, 0.0, 1e-3)
    assert len(traj) == 1 and traj.energy_drift() == 0.0


@pytest.mark.parametrize("t_end, dt", [(1.0, 0.0), (1.0, -1e-3), (-1.0, 1e-3)])
def test_integrate_argument_errors(t_end, dt):
    with pytest.raises(ValueError):
        integrate(*GENTLE, t_end, dt)


def test_chamber_exit_carries_partial_trajectory():
    # a fast particle driven at the wall with an absurd step overshoots it
    p, c = PhasePoint([0.3], [2.0]), Couplings(-1.0, 0.5, 0.0)
    with pytest.raises(ChamberError) as info:
        integrate(p, c, 5.0, 0.5)
    partial = info.value.trajectory
    assert isinstance(partial, Trajectory) and len(partial) >= 1


def test_short_run_conserves_everything():
    p, c = GENTLE
    traj = integrate(p, c, 1.0, 1e-3)
    assert traj.energy_drift() < 1e-11
    assert spectral_drift(traj) < 1e-10
    assert trace_drift(traj) < 1e-10
    for v in (LaxVariant.A_TILDE, LaxVariant.A_CHECK):
        assert spectral_drift(traj, v) < 1e-10
    # the ungauged A is isospectral only at kappa = 0
    assert spectral_drift(traj, LaxVariant.A) > 1e-3


def test_rk4_reversibility():
    p, c = GENTLE
    y0 = p.as_vector()
    y = y0
    for _ in range(50):
        y = rk4_step(y, 1e-2, c)
    for _ in range(50):
        y = rk4_step(y, -1e-2, c)
    assert np.allclose(y, y0, atol=1e-10)


def test_simulation_range_seeds_move():
    rng = np.random.default_rng(3)
    p = random_point(2, rng, SIMULATION_THETA_RANGE)
    assert np.all(np.abs(p.theta) <= 0.5)
    c = Couplings(-0.8, 1.0, 0.5)
    traj = integrate(p, c, 0.5, 1e-3)
    assert not np.allclose(traj.final.lam, p.lam)


def test_spectrum_rejects_complex_eigenvalues():
    with pytest.raises(DomainError):
        spectrum(np.array([[0.0, -1.0], [1.0, 0.0]]))
    assert np.allclose(spectrum(np.diag([3.0, 1.0])), [1.0, 3.0])


def test_trace_invariants_match_spectrum():
    p, c = GENTLE
    w = spectrum(lax_variant(p, c, LaxVariant.A_HAT))
    tr = trace_invariants(p, c)
    assert len(tr) == 4
    assert np.allclose(tr, [np.sum(w ** k) for k in range(1, 5)], rtol=1e-10)
    # first invariant is twice the energy up to the gauge
    assert tr[0].real == pytest.approx(2 * hamiltonian(p, c), rel=1e-11)


@pytest.mark.parametrize("kappa", [0.0, 1.0])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_lax_equation(n, kappa, rng):
    p = random_point(n, rng)
    c = Couplings(-0.9, 1.2, kappa)
    rec = verify_lax_equation(p, c).records[0]
    assert rec.passed, rec.residual
    assert rec.check_id == "laxpair.equation"


def test_lax_equation_control_fails_away_from_zero_kappa():
    p, c = PhasePoint([2.2, 1.0], [0.3, -0.5]), Couplings(-0.7, 1.0, 1.0)
    B = lax_pair_B(p, c)
    rec = verify_lax_equation(p, c, B=compact_part(B)).records[0]
    assert rec.residual > 1e-2
    # at kappa = 0 the k-part is the whole of B^
    c0 = c.with_kappa(0.0)
    assert np.allclose(compact_part(lax_pair_B(p, c0)), lax_pair_B(p, c0), atol=1e-13)


def test_flow_derivative_step_convergence():
    p, c = GENTLE
    Ahat = lax_variant(p, c, LaxVariant.A_HAT)
    B = lax_pair_B(p, c)
    exact = B @ Ahat - Ahat @ B
    err = [np.linalg.norm(flow_derivative(p, c, delta=d) - exact) for d in (1e-1, 5e-2)]
    # Richardson-extrapolated central differences are fourth order
    assert err[0] / err[1] > 8


def test_time_scale_and_min_gap():
    p, c = GENTLE
    assert min_gap(p) == pytest.approx(1.5)
    assert 0 < time_scale(p, c) <= 1.0


def test_csv_export(tmp_path):
    p, c = GENTLE
    traj = integrate(p, c, 0.01, 1e-3)
    path = tmp_path / "traj.csv"
    traj.to_csv(path)
    rows = list(csv.reader(open(path)))
    assert rows[0] == ["t", "lambda_1", "lambda_2", "theta_1", "theta_2", "H", "drift"]
    assert len(rows) == len(traj) + 1
    assert float(rows[1][1]) == 3.0 and float(rows[-1][0]) == pytest.approx(0.01)
