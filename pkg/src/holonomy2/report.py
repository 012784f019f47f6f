"""Structured run reports: per-check residuals, tolerances and verdicts.

The machine form is JSON with a fixed key order.  Wall-clock data lives under
the single top-level key ``wall_clock_s`` so that reports of identical runs
are byte-identical once that key is dropped.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

SCHEMA_VERSION = 1


def _clean(v):
    # JSON has no NaN/inf; numpy scalars and arrays become plain Python
    if isinstance(v, dict):
        return {str(k): _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if hasattr(v, "tolist"):
        return _clean(v.tolist())
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


@dataclass
class Check:
    name: str
    residual: float
    tolerance: float
    error_estimate: Optional[float] = None
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tolerance)

    def as_dict(self) -> dict:
        return {"name": self.name, "residual": float(self.residual),
                "tolerance": float(self.tolerance), "passed": self.passed,
                "error_estimate": None if self.error_estimate is None else float(self.error_estimate),
                "details": self.details}


@dataclass
class Report:
    subcommand: str
    config: dict
    checks: list = field(default_factory=list)
    info: dict = field(default_factory=dict)
    wall_clock_s: float = 0.0

    def add(self, name, residual, tolerance, error_estimate=None, **details) -> Check:
        c = Check(name, float(residual), float(tolerance), error_estimate, details)
        self.checks.append(c)
        return c

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.residual, c.tolerance, c.error_estimate, c.details))
        for k, v in other.info.items():
            self.info[prefix + k] = v

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self, wall_clock: bool = True) -> dict:
        out = {"schema_version": SCHEMA_VERSION, "subcommand": self.subcommand,
               "config": self.config, "checks": [c.as_dict() for c in self.checks],
               "info": self.info, "verdict": "pass" if self.ok else "fail"}
        if wall_clock:
            out["wall_clock_s"] = self.wall_clock_s
        return _clean(out)

    def to_json(self, wall_clock: bool = True) -> str:
        return json.dumps(self.as_dict(wall_clock), indent=2, allow_nan=False) + "\n"

    def to_text(self) -> str:
        lines = [f"{self.subcommand}: {'PASS' if self.ok else 'FAIL'}"]
        for c in self.checks:
            est = "" if c.error_estimate is None else f"  est={c.error_estimate:.2e}"
            lines.append(f"  [{'ok' if c.passed else 'FAIL'}] {c.name}: residual={c.residual:.3e}"
                         f" tol={c.tolerance:.1e}{est}")
        for k, v in self.info.items():
            lines.append(f"  {k}: {v}")
        lines.append(f"  wall clock: {self.wall_clock_s:.2f} s")
        return "\n".join(lines) + "\n"
