"""Structured verification reports: one record per identity check."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class Check:
    check_id: str
    anchor: str           # equation / theorem label the check certifies
    points: int
    max_residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tol

    def to_dict(self) -> dict:
        return {
            "id": self.check_id,
            "anchor": self.anchor,
            "points": self.points,
            "max_residual": self.max_residual,
            "tol": self.tol,
            "passed": self.passed,
        }


@dataclass
class VerificationReport:
    scenario: str = ""
    config: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)

    def add(self, check_id: str, anchor: str, max_residual: float,
            tol: float, points: int = 0) -> Check:
        c = Check(check_id, anchor, points, float(max_residual), float(tol))
        self.checks.append(c)
        return c

    def extend(self, other: "VerificationReport"):
        self.checks.extend(other.checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def summary(self) -> dict:
        return {
            "total": len(self.checks),
            "passed": sum(c.passed for c in self.checks),
            "failed": sum(not c.passed for c in self.checks),
        }

    def to_dict(self) -> dict:
        checks = sorted(self.checks, key=lambda c: c.check_id)
        return {
            "scenario": self.scenario,
            "config": self.config,
            "checks": [c.to_dict() for c in checks],
            "summary": self.summary(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        lines = [f"scenario: {self.scenario}"]
        for c in sorted(self.checks, key=lambda c: c.check_id):
            status = "PASS" if c.passed else "FAIL"
            lines.append(f"[{status}] {c.check_id} ({c.anchor}) "
                         f"max_residual={c.max_residual:.3e} tol={c.tol:.1e}")
        s = self.summary()
        lines.append(f"{s['passed']}/{s['total']} checks passed")
        return "\n".join(lines) + "\n"
