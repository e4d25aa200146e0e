"""Check records and the versioned JSON verification report."""
import json
from dataclasses import asdict, dataclass, field

import numpy as np

SCHEMA = 1


def _plain(value):
    """Convert numpy scalars and arrays into JSON-friendly Python values."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (np.floating, float)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": float(value.real), "im": float(value.imag)}
    return value


@dataclass
class CheckRecord:
    check_id: str
    anchor: str
    residual: float
    tolerance: float
    family: str = None
    n: int = None
    point: dict = None
    details: dict = field(default_factory=dict)
    #: "upper" passes when residual < tolerance; "lower" (negative controls) when residual > tolerance
    bound: str = "upper"

    @property
    def passed(self):
        if not np.isfinite(self.residual):
            return False
        if self.bound == "lower":
            return bool(self.residual > self.tolerance)
        return bool(self.residual < self.tolerance)

    def to_dict(self):
        d = _plain(asdict(self))
        d["pass"] = self.passed
        return d

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        d.pop("pass", None)
        return cls(**d)


@dataclass
class VerificationReport:
    records: list = field(default_factory=list)
    bracket_sign: int = None
    seed: int = None
    version: str = None
    timestamp: str = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.version is None:
            from . import __version__
            self.version = __version__

    def add(self, record):
        self.records.append(record)
        return record

    def extend(self, other):
        self.records.extend(other.records)

    @property
    def passed(self):
        return all(r.passed for r in self.records)

    @property
    def max_residual(self):
        return max((r.residual for r in self.records), default=0.0)

    def failures(self):
        return [r for r in self.records if not r.passed]

    def to_dict(self):
        return {
            "schema": SCHEMA,
            "version": self.version,
            "seed": self.seed,
            "calibration": {"bracket_sign": self.bracket_sign},
            "meta": _plain(self.meta),
            "summary": {"checks": len(self.records),
                        "failed": len(self.failures()),
                        "pass": self.passed},
            "records": [r.to_dict() for r in self.records],
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_dict(cls, d):
        if d.get("schema") != SCHEMA:
            raise ValueError(f"unsupported report schema {d.get('schema')!r}")
        return cls(
            records=[CheckRecord.from_dict(r) for r in d["records"]],
            bracket_sign=d["calibration"]["bracket_sign"],
            seed=d["seed"],
            version=d["version"],
            timestamp=d.get("timestamp"),
            meta=d.get("meta", {}),
        )

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def point_dict(p, c=None):
    d = {"lambda": p.lam.tolist(), "theta": p.theta.tolist()}
    if c is not None:
        d.update(mu=c.mu, nu=c.nu, kappa=c.kappa)
    return d
