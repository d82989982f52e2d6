"""Verification reports and their JSON/CSV serialization."""

from __future__ import annotations

import datetime as _dt
import json
import math
from dataclasses import dataclass, field

import numpy as np

PASS, FAIL = "pass", "fail"


@dataclass
class Check:
    name: str
    expected: object
    actual: object
    tolerance: float
    status: str

    def to_dict(self):
        return {"name": self.name, "expected": self.expected, "actual": self.actual,
                "tolerance": self.tolerance, "status": self.status}


@dataclass
class VerificationReport:
    command: str
    parameters: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)

    @property
    def overall(self) -> str:
        return PASS if all(c.status == PASS for c in self.checks) else FAIL

    @property
    def passed(self) -> bool:
        return self.overall == PASS

    def add(self, name, expected, actual, tolerance, ok) -> Check:
        check = Check(name, expected, actual, tolerance, PASS if ok else FAIL)
        self.checks.append(check)
        return check

    def close(self, name, expected, actual, tol):
        """``|actual - expected| <= tol``."""
        ok = bool(np.isfinite(actual)) and abs(actual - expected) <= tol
        return self.add(name, expected, actual, tol, ok)

    def at_most(self, name, bound, actual, tol=0.0):
        return self.add(name, bound, actual, tol, bool(actual <= bound + tol))

    def at_least(self, name, bound, actual, tol=0.0):
        return self.add(name, bound, actual, tol, bool(actual >= bound - tol))

    def to_dict(self, timestamp: str | None = None) -> dict:
        return {
            "command": self.command,
            "parameters": dict(self.parameters),
            "checks": [c.to_dict() for c in self.checks],
            "overall": self.overall,
            "timestamp": timestamp if timestamp is not None else utc_timestamp(),
        }


def utc_timestamp() -> str:
    return _dt.datetime.now(_dt.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def format_number(x) -> str:
    """17 significant digits, so every double round-trips exactly."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite number {x!r}")
    if x == int(x) and abs(x) < 1e16:
        return repr(float(x))
    return format(x, ".17g")


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with floats written at 17 significant digits.

    The stdlib encoder always uses the shortest repr, so numbers are
    formatted here and everything else is delegated to :mod:`json`.
    """
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, (bool, np.bool_)) or obj is None or isinstance(obj, str):
        return json.dumps(bool(obj) if isinstance(obj, np.bool_) else obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_number(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")
