"""Command-line front end: ``rsvd-rmatrix verify | simulate | calibrate``.

Settings come from an optional flat ``key = value`` file (``--config``) and
are overridden by flags.  Recognized keys::

    n, seed, count, suite, family, tol, fd_step, richardson, jobs, out,
    mu, nu, kappa, lambda, theta, t_end, dt, variant

``lambda`` and ``theta`` are comma-separated lists; ``suite`` is a
comma-separated list of suite names; blank lines and ``#`` comments are
ignored.  Exit codes: 0 all checks pass, 1 numerical failure, 2 usage or
configuration error.
"""
import argparse
import datetime
import json
import os
import sys
from dataclasses import dataclass, field, fields

import numpy as np

from . import __version__
from .checks import SUITES, Campaign, run_suites
from .dynamics import integrate, min_gap, spectral_drift, trace_drift
from .errors import CalibrationError, ChamberError, CouplingError
from .lax import Couplings, LaxVariant, PhasePoint, hamiltonian
from .poisson import CALIBRATED_SIGN, BracketConfig, calibrate
from .report import VerificationReport, point_dict
from .rmatrix import FAMILIES
from .sampling import SIMULATION_THETA_RANGE, random_couplings, random_point

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class ConfigError(ValueError):
    pass


def _floats(text):
    return [float(x) for x in str(text).split(",") if x.strip()]


def _names(text):
    return [x.strip() for x in str(text).split(",") if x.strip()]


def _bool(text):
    value = str(text).strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


@dataclass
class RunConfig:
    n: int = 2
    seed: int = 0
    count: int = 20
    suite: list = field(default_factory=lambda: list(SUITES))
    family: str = "all"
    tol: float = None
    fd_step: float = 1e-5
    richardson: bool = True
    jobs: int = 1
    out: str = "."
    mu: float = None
    nu: float = None
    kappa: float = None
    lam: list = None
    theta: list = None
    t_end: float = 10.0
    dt: float = 1e-3
    variant: str = "A_hat"

    _parsers = {
        "n": int, "seed": int, "count": int, "suite": _names, "family": str,
        "tol": float, "fd_step": float, "richardson": _bool, "jobs": int, "out": str,
        "mu": float, "nu": float, "kappa": float, "lam": _floats, "theta": _floats,
        "t_end": float, "dt": float, "variant": str,
    }

    def set(self, key, value):
        key = {"lambda": "lam", "suites": "suite", "families": "family"}.get(key, key)
        if key not in self._parsers:
            raise ConfigError(f"unknown configuration key {key!r}")
        try:
            setattr(self, key, self._parsers[key](value))
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {exc}") from exc

    def validate(self):
        if self.n < 1:
            raise ConfigError("n must be at least 1")
        if self.count < 1:
            raise ConfigError("count must be at least 1")
        unknown = [s for s in self.suite if s not in SUITES]
        if unknown:
            raise ConfigError(f"unknown suite(s) {unknown}; available: {', '.join(SUITES)}")
        if self.family != "all" and self.family not in FAMILIES:
            raise ConfigError(f"family must be one of {FAMILIES} or 'all'")
        for name in ("tol", "fd_step", "dt"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise ConfigError(f"{name} must be positive")
        if self.t_end < 0:
            raise ConfigError("t_end must be nonnegative")
        if self.jobs < 1:
            raise ConfigError("jobs must be at least 1")
        try:
            LaxVariant(self.variant)
        except ValueError:
            raise ConfigError(f"unknown Lax variant {self.variant!r}") from None
        for name in ("lam", "theta"):
            value = getattr(self, name)
            if value is not None and len(value) != self.n:
                raise ConfigError(f"{name} has {len(value)} entries, expected n={self.n}")

    @property
    def families(self):
        return FAMILIES if self.family == "all" else (self.family,)

    def bracket_config(self):
        kwargs = dict(fd_step=self.fd_step, richardson=self.richardson)
        if self.tol is not None:
            kwargs["tolerance"] = self.tol
        return BracketConfig(**kwargs)

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


def load_config(path):
    """Parse a flat key = value file into a RunConfig."""
    cfg = RunConfig()
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for number, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{number}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        cfg.set(key, value)
    return cfg


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rsvd-rmatrix",
        description="Verify the r-matrix structure of the rational BC_n RSvD model numerically.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", metavar="PATH", help="flat key = value configuration file")
        p.add_argument("--n", type=int, help="number of particles")
        p.add_argument("--seed", type=int, help="random seed")
        p.add_argument("--out", metavar="DIR", help="output directory")
        p.add_argument("--tol", type=float, help="override every tolerance")

    verify = sub.add_parser("verify", help="run verification suites and write report.json")
    common(verify)
    verify.add_argument("--suite", metavar="NAME[,NAME...]", help=f"suites to run ({', '.join(SUITES)})")
    verify.add_argument("--family", choices=FAMILIES + ("all",), help="coefficient family")
    verify.add_argument("--count", type=int, help="random points per suite")
    verify.add_argument("--jobs", type=int, help="suites run in parallel")

    simulate = sub.add_parser("simulate", help="integrate the flow and write trajectory.csv")
    common(simulate)
    simulate.add_argument("--t-end", dest="t_end", type=float, help="final time")
    simulate.add_argument("--dt", type=float, help="RK4 step")

    calib = sub.add_parser("calibrate", help="settle the bracket orientation at n = 1")
    calib.add_argument("--out", metavar="DIR", help="output directory")
    return parser


def resolve_config(args):
    cfg = load_config(args.config) if getattr(args, "config", None) else RunConfig()
    for key in ("n", "seed", "out", "tol", "suite", "family", "count", "jobs", "t_end", "dt"):
        value = getattr(args, key, None)
        if value is not None:
            cfg.set(key, value) if key == "suite" else setattr(cfg, key, value)
    cfg.validate()
    return cfg


def _write(path, text):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _now():
    return datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")


def cmd_verify(cfg, stream=None):
    stream = stream or sys.stdout
    campaign = Campaign(n=cfg.n, count=cfg.count, seed=cfg.seed, families=cfg.families,
                        tol=cfg.tol, cfg=cfg.bracket_config())
    records = run_suites(campaign, cfg.suite, jobs=cfg.jobs)
    report = VerificationReport(records=records, bracket_sign=campaign.cfg.sign, seed=cfg.seed,
                                timestamp=_now(),
                                meta={"command": "verify", "n": cfg.n, "count": cfg.count,
                                      "suites": cfg.suite, "families": list(cfg.families)})
    path = os.path.join(cfg.out, "report.json")
    _write(path, report.to_json())
    for suite in cfg.suite:
        mine = [r for r in records if r.check_id.split(".")[0] == suite]
        failed = sum(not r.passed for r in mine)
        worst = max((r.residual for r in mine if r.bound == "upper"), default=0.0)
        status = "PASS" if failed == 0 else "FAIL"
        print(f"{status} {suite:12s} {len(mine):4d} checks  {failed:3d} failed  max residual {worst:.2e}", file=stream)
    print(f"report written to {path}", file=stream)
    return EXIT_OK if report.passed else EXIT_FAIL


def initial_state(cfg):
    rng = np.random.default_rng(cfg.seed)
    p = random_point(cfg.n, rng, SIMULATION_THETA_RANGE)
    if cfg.lam is not None or cfg.theta is not None:
        p = PhasePoint(p.lam if cfg.lam is None else cfg.lam, p.theta if cfg.theta is None else cfg.theta)
    c = random_couplings(rng)
    c = Couplings(c.mu if cfg.mu is None else cfg.mu,
                  c.nu if cfg.nu is None else cfg.nu,
                  c.kappa if cfg.kappa is None else cfg.kappa)
    return p, c


def cmd_simulate(cfg, stream=None):
    stream = stream or sys.stdout
    try:
        p0, c = initial_state(cfg)
    except (CouplingError, ChamberError) as exc:
        raise ConfigError(str(exc)) from exc
    variant = LaxVariant(cfg.variant)
    csv_path = os.path.join(cfg.out, "trajectory.csv")
    os.makedirs(cfg.out, exist_ok=True)
    summary = {"schema": 1, "seed": cfg.seed, "bracket_sign": CALIBRATED_SIGN,
               "initial": point_dict(p0, c), "t_end": cfg.t_end, "dt": cfg.dt,
               "method": "rk4", "variant": variant.value}
    code = EXIT_OK
    try:
        traj = integrate(p0, c, cfg.t_end, cfg.dt)
    except ChamberError as exc:
        traj = exc.trajectory
        summary["error"] = str(exc)
        code = EXIT_FAIL
    traj.to_csv(csv_path, variant)
    H = traj.energies()
    summary.update(
        steps=len(traj) - 1,
        final_time=float(traj.times[-1]),
        final=point_dict(traj.final),
        energy=float(H[0]),
        energy_drift=traj.energy_drift(),
        spectral_drift=spectral_drift(traj, variant),
        trace_drift=trace_drift(traj, variant),
        min_gap_start=min_gap(traj.states[0]),
        min_gap_end=min_gap(traj.final),
        timestamp=_now(),
    )
    _write(os.path.join(cfg.out, "summary.json"), json.dumps(summary, indent=2, sort_keys=True))
    print(f"{len(traj)} states to t={traj.times[-1]:.6g}; energy drift {summary['energy_drift']:.2e}, "
          f"spectral drift {summary['spectral_drift']:.2e}", file=stream)
    if code:
        print(f"stopped early: {summary['error']}", file=stream)
    return code


def cmd_calibrate(out=None, stream=None):
    stream = stream or sys.stdout
    try:
        result = calibrate()
    except CalibrationError as exc:
        print(f"calibration failed: {exc}", file=stream)
        return EXIT_FAIL
    result = {"schema": 1, **result}
    text = json.dumps(result, indent=2, sort_keys=True)
    print(text, file=stream)
    if out:
        _write(os.path.join(out, "calibration.json"), text)
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "calibrate":
            return cmd_calibrate(args.out)
        cfg = resolve_config(args)
        if args.command == "verify":
            return cmd_verify(cfg)
        return cmd_simulate(cfg)
    except ConfigError as exc:
        print(f"rsvd-rmatrix: configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
