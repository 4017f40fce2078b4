"""Data models for the services layer"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, List, Optional


@dataclass
class CheckResult:
    """One named check of a suite, reduced over all of its cases.

    ``margin`` is the worst slack seen; the check passes when it is >= 0.
    ``witness`` describes the case that produced the worst margin.
    """

    name: str
    margin: float
    value: Optional[float] = None
    cases: int = 1
    witness: Optional[dict] = None

    @property
    def passed(self) -> bool:
        return self.margin >= 0.0

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "margin": self.margin,
            "value": self.value,
            "cases": self.cases,
            "witness": self.witness,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CheckResult":
        return cls(
            name=data["name"],
            margin=data["margin"],
            value=data.get("value"),
            cases=data.get("cases", 1),
            witness=data.get("witness"),
        )


@dataclass
class SuiteReport:
    suite: str
    seed: int
    checks: List[CheckResult] = field(default_factory=list)
    started_at: datetime = field(default_factory=datetime.now)
    completed_at: Optional[datetime] = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]

    @property
    def witness(self) -> Optional[dict]:
        failed = self.failures
        return failed[0].witness if failed else None

    def to_dict(self, timestamps: bool = True) -> dict:
        data: dict[str, Any] = {
            "suite": self.suite,
            "seed": self.seed,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }
        if timestamps:
            data["started_at"] = self.started_at.isoformat()
            data["completed_at"] = self.completed_at.isoformat() if self.completed_at else None
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "SuiteReport":
        report = cls(
            suite=data["suite"],
            seed=data["seed"],
            checks=[CheckResult.from_dict(c) for c in data.get("checks", [])],
        )
        if data.get("started_at"):
            report.started_at = datetime.fromisoformat(data["started_at"])
        if data.get("completed_at"):
            report.completed_at = datetime.fromisoformat(data["completed_at"])
        return report
