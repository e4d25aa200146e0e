import numpy as np
import pytest
from hypothesis import given, settings

from rsvd_rmatrix.errors import CalibrationError, ChamberError
from rsvd_rmatrix.dynamics import flow_rhs, hamilton_equations, hamiltonian_gradient
from rsvd_rmatrix.lax import Couplings, LaxVariant, PhasePoint, hamiltonian
from rsvd_rmatrix.poisson import (
    CALIBRATED_SIGN, BracketConfig, _lambda_step, bracket, calibrate, gradient,
    tensor_bracket_lax, verify_theorem,
)
from rsvd_rmatrix.rmatrix import FAMILIES

from conftest import couplings, phase_points

C0 = Couplings(-0.8, 1.1, 0.6)


def coordinate(kind, k):
    return lambda p, c: (p.lam if kind == "lam" else p.theta)[k]


def test_canonical_brackets():
    p = PhasePoint([2.5, 1.2], [0.3, -0.1])
    for a in range(2):
        for b in range(2):
            lt = bracket(coordinate("lam", a), coordinate("theta", b), p, C0)
            assert lt == pytest.approx(-0.5 if a == b else 0.0, abs=1e-9)
            assert bracket(coordinate("lam", a), coordinate("lam", b), p, C0) == pytest.approx(0, abs=1e-12)
            assert bracket(coordinate("theta", a), coordinate("theta", b), p, C0) == pytest.approx(0, abs=1e-12)


def test_positive_orientation_flips_sign():
    p = PhasePoint([1.0], [0.0])
    cfg = BracketConfig(sign=1)
    assert bracket(coordinate("lam", 0), coordinate("theta", 0), p, C0, cfg) == pytest.approx(0.5, abs=1e-9)


def _f(p, c):
    return np.sin(p.lam[0]) * np.exp(p.theta[-1]) + p.lam[-1] ** 2 * p.theta[0]


def _g(p, c):
    return np.cos(p.theta[0] * p.lam[-1]) + p.lam[0] * p.theta[-1] ** 3


@settings(max_examples=20, deadline=None)
@given(phase_points(max_theta=1.0))
def test_bracket_antisymmetry_and_leibniz(p):
    fg = bracket(_f, _g, p, C0)
    assert fg == pytest.approx(-bracket(_g, _f, p, C0), abs=1e-7)
    h = lambda q, c: hamiltonian(q, c)
    prod = lambda q, c: _f(q, c) * _g(q, c)
    lhs = bracket(prod, h, p, C0)
    rhs = _f(p, C0) * bracket(_g, h, p, C0) + _g(p, C0) * bracket(_f, h, p, C0)
    assert lhs == pytest.approx(rhs, rel=1e-6, abs=1e-6)


def test_richardson_beats_plain_central_differences():
    p = PhasePoint([1.7, 0.6], [0.4, -0.2])
    exact_l, exact_t = hamiltonian_gradient(p, C0)
    errs = {}
    for rich in (False, True):
        cfg = BracketConfig(fd_step=1e-3, richardson=rich)
        dl, dt = gradient(hamiltonian, p, C0, cfg)
        errs[rich] = max(np.max(np.abs(np.array(dl) - exact_l)), np.max(np.abs(np.array(dt) - exact_t)))
    assert errs[True] < errs[False] / 10


def test_lambda_step_shrinks_near_wall():
    p = PhasePoint([1.0, 1.0 - 3e-5], [0.0, 0.0], min_gap=1e-8)
    h = _lambda_step(p, 1, 1e-4)
    assert h < 3e-5
    tight = PhasePoint([1.0, 1.0 - 1e-7], [0.0, 0.0], min_gap=1e-8)
    with pytest.raises(ChamberError):
        _lambda_step(tight, 1, 1e-3)


@pytest.mark.parametrize("kwargs", [dict(fd_step=0), dict(sign=2), dict(tolerance=-1.0)])
def test_bracket_config_validation(kwargs):
    with pytest.raises(ValueError):
        BracketConfig(**kwargs)


def test_calibration():
    result = calibrate()
    assert result["sign"] == CALIBRATED_SIGN == -1
    assert result["residual_minus"] < 1e-8
    assert result["residual_plus"] > 0.5
    assert result["gap"] > 1e6


def test_calibration_ambiguous_threshold():
    with pytest.raises(CalibrationError):
        calibrate(threshold=10.0)


def test_tensor_bracket_is_antisymmetric_under_swap():
    from rsvd_rmatrix.tensor import swap
    p = PhasePoint([2.0, 0.9], [0.3, 0.1])
    T = tensor_bracket_lax(p, C0, LaxVariant.A_HAT)
    assert np.allclose(swap(T), -T, atol=1e-12)


@pytest.mark.parametrize("family", FAMILIES)
@pytest.mark.parametrize("n", [1, 2])
def test_theorem_at_seeded_points(family, n, rng):
    from rsvd_rmatrix.sampling import random_sample
    for _ in range(3):
        p, c = random_sample(n, rng)
        rec = verify_theorem(p, c, family).records[0]
        assert rec.check_id == f"theorem.{family}"
        assert rec.passed, rec.residual
    if family == "plain":
        assert rec.point["kappa"] == 0.0


@settings(max_examples=20, deadline=None)
@given(phase_points(), couplings())
def test_flow_rhs_matches_analytic_gradient(p, c):
    dl_fd, dt_fd = flow_rhs(p, c)
    dl, dt = hamilton_equations(p, c)
    scale = 1 + np.max(np.abs(np.concatenate([dl, dt])))
    assert np.max(np.abs(dl_fd - dl)) < 1e-7 * scale
    assert np.max(np.abs(dt_fd - dt)) < 1e-7 * scale


@pytest.mark.parametrize("lam, theta, nu", [(1.0, 0.3, 1.0), (0.5, -0.7, 2.0), (2.0, 1.1, 0.4)])
def test_one_particle_velocity_closed_form(lam, theta, nu):
    p, c = PhasePoint([lam], [theta]), Couplings(-1.0, nu, 0.0)
    dlam, _ = hamilton_equations(p, c)
    assert dlam[0] == pytest.approx(-np.sinh(2 * theta) * np.sqrt(1 + nu ** 2 / lam ** 2), rel=1e-14)
