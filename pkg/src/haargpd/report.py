"""Check results and deterministic JSON serialisation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .scalars import Gauss, format_rational

MAX_MESSAGES = 5


@dataclass
class Check:
    name: str
    samples: int = 0
    violations: int = 0
    messages: list[str] = field(default_factory=list)

    def record(self, ok: bool, message: str = "") -> bool:
        self.samples += 1
        if not ok:
            self.violations += 1
            if message and len(self.messages) < MAX_MESSAGES:
                self.messages.append(message)
        return ok

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def to_json(self) -> dict:
        out = {"name": self.name, "samples": self.samples, "violations": self.violations}
        if self.messages:
            out["messages"] = list(self.messages)
        return out


@dataclass
class Report:
    checks: list[Check] = field(default_factory=list)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, other: "Report") -> None:
        self.checks.extend(other.checks)

    @property
    def violations(self) -> int:
        return sum(c.violations for c in self.checks)

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        return {"checks": [c.to_json() for c in self.checks]}


def jsonable(value):
    """Convert exact scalars to strings; nothing becomes a float."""
    if isinstance(value, bool) or value is None or isinstance(value, (str, int)):
        return value
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, Gauss):
        return value.to_json()
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if hasattr(value, "to_json"):
        return jsonable(value.to_json())
    if hasattr(value, "text"):
        return value.text()
    raise TypeError(f"cannot serialise {type(value).__name__}")


def dumps(payload) -> str:
    return json.dumps(jsonable(payload), sort_keys=True, indent=2) + "\n"
