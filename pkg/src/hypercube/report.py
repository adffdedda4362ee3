"""Structured verifier outcomes with a stable JSON layout.

Key order of the JSON object is fixed: schema, command, inputs, quantities,
assertions, config, passed. Assertion rows are (name, lhs, relation, rhs,
slack, passed, witness).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

SCHEMA_VERSION = 1
DEFAULT_TOL = 1e-9


def _plain(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        x = float(x)
        if math.isfinite(x):
            return x
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    if isinstance(x, np.ndarray):
        return [_plain(v) for v in x.tolist()]
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def serialize_witness(f) -> str | None:
    from .cube import BooleanFunction, RealFunction
    from .fourier import Spectrum, transform

    if f is None:
        return None
    if isinstance(f, BooleanFunction):
        return f.to_bfn()
    if isinstance(f, Spectrum):
        return f.to_spec()
    if isinstance(f, RealFunction):
        return transform(f).to_spec()
    return str(f)


def holds(lhs: float, rhs: float, relation: str, tol: float) -> bool:
    """Compare with a relative tolerance scaled by max(1, |rhs|)."""
    slack = tol * max(1.0, abs(rhs))
    if relation == "<=":
        return lhs <= rhs + slack
    if relation == ">=":
        return lhs >= rhs - slack
    if relation == "==":
        return abs(lhs - rhs) <= slack
    raise ValueError(f"unknown relation {relation!r}")


def holds_array(lhs, rhs, relation: str, tol: float) -> np.ndarray:
    lhs = np.asarray(lhs, dtype=np.float64)
    rhs = np.asarray(rhs, dtype=np.float64)
    slack = tol * np.maximum(1.0, np.abs(rhs))
    if relation == "<=":
        return lhs <= rhs + slack
    if relation == ">=":
        return lhs >= rhs - slack
    if relation == "==":
        return np.abs(lhs - rhs) <= slack
    raise ValueError(f"unknown relation {relation!r}")


@dataclass
class Assertion:
    name: str
    lhs: float
    relation: str
    rhs: float
    passed: bool
    witness: str | None = None

    @property
    def slack(self) -> float:
        if self.relation == ">=":
            return self.lhs - self.rhs
        if self.relation == "<=":
            return self.rhs - self.lhs
        return -abs(self.lhs - self.rhs)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": _plain(self.lhs),
            "relation": self.relation,
            "rhs": _plain(self.rhs),
            "slack": _plain(self.slack),
            "passed": bool(self.passed),
            "witness": self.witness,
        }


@dataclass
class Report:
    command: str
    inputs: dict[str, Any] = field(default_factory=dict)
    tol: float = DEFAULT_TOL
    quantities: dict[str, Any] = field(default_factory=dict)
    assertions: list[Assertion] = field(default_factory=list)
    config: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.config.setdefault("tolerance", self.tol)

    def check(self, name, lhs, rhs, relation="<=", witness=None, tol=None) -> bool:
        lhs, rhs = float(lhs), float(rhs)
        ok = holds(lhs, rhs, relation, self.tol if tol is None else tol)
        self.assertions.append(
            Assertion(name, lhs, relation, rhs, ok, None if ok else serialize_witness(witness))
        )
        return ok

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assertions)

    def __bool__(self):
        return self.passed

    def failures(self) -> list[Assertion]:
        return [a for a in self.assertions if not a.passed]

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "command": self.command,
            "inputs": _plain(self.inputs),
            "quantities": _plain(self.quantities),
            "assertions": [a.to_dict() for a in self.assertions],
            "config": _plain(self.config),
            "passed": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False)

    def to_text(self) -> str:
        out = [f"{self.command}  ({'PASS' if self.passed else 'FAIL'})"]
        for k, v in self.inputs.items():
            out.append(f"  input    {k:<24} {_fmt(v)}")
        for k, v in self.quantities.items():
            out.append(f"  value    {k:<24} {_fmt(v)}")
        for a in self.assertions:
            mark = "ok  " if a.passed else "FAIL"
            out.append(f"  {mark}     {a.name:<24} {a.lhs:.12g} {a.relation} {a.rhs:.12g}")
            if a.witness:
                out.append("           witness: " + a.witness.strip().replace("\n", " | "))
        return "\n".join(out)


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, (list, tuple, np.ndarray)):
        items = list(v)
        if len(items) > 16:
            return "[" + ", ".join(_fmt(x) for x in items[:16]) + ", ...]"
        return "[" + ", ".join(_fmt(x) for x in items) + "]"
    return str(v)
