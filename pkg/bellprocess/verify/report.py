"""
Result records of the verification harness.
"""

from datetime import datetime, timezone
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Field


class GateKind(str, Enum):
    UPPER = "upper"
    LOWER = "lower"
    IDENTITY = "identity"


class BoundReport(BaseModel):
    """An empirical value against its theoretical counterpart.

    UPPER passes when empirical <= theoretical + sigmas*stderr + abs_tol,
    LOWER when empirical >= theoretical - sigmas*stderr - abs_tol, and
    IDENTITY when both hold.
    """

    kind: GateKind = GateKind.UPPER
    empirical: float
    theoretical: float
    stderr: float = 0.0
    sigmas: float = 3.0
    abs_tol: float = 0.0
    passed: bool = False
    details: Dict[str, Any] = Field(default_factory=dict)

    @property
    def slack(self) -> float:
        return self.theoretical - self.empirical

    @property
    def tolerance(self) -> float:
        return self.sigmas * self.stderr + self.abs_tol

    @classmethod
    def gate(
        cls,
        kind: GateKind,
        empirical: float,
        theoretical: float,
        stderr: float = 0.0,
        sigmas: float = 3.0,
        abs_tol: float = 0.0,
        **details: Any,
    ) -> "BoundReport":
        empirical, theoretical = float(empirical), float(theoretical)
        tol = sigmas * stderr + abs_tol
        if np.isnan(empirical) or np.isnan(theoretical):
            passed = False
        elif kind is GateKind.UPPER:
            passed = empirical <= theoretical + tol
        elif kind is GateKind.LOWER:
            passed = empirical >= theoretical - tol
        else:
            passed = abs(empirical - theoretical) <= tol
        return cls(
            kind=kind,
            empirical=empirical,
            theoretical=theoretical,
            stderr=float(stderr),
            sigmas=sigmas,
            abs_tol=abs_tol,
            passed=bool(passed),
            details=details,
        )


class CheckResult(BaseModel):
    """One named check as written to the verification report."""

    name: str
    passed: bool
    empirical: Optional[float] = None
    theoretical: Optional[float] = None
    tolerance: Optional[float] = None
    seed: Optional[int] = None
    M: Optional[int] = None
    retried: bool = False
    applicable: bool = True
    error: Optional[str] = None
    duration_s: float = 0.0
    details: Dict[str, Any] = Field(default_factory=dict)

    @classmethod
    def from_bound(cls, name: str, report: BoundReport, **extra: Any) -> "CheckResult":
        return cls(
            name=name,
            passed=report.passed,
            empirical=report.empirical,
            theoretical=report.theoretical,
            tolerance=report.tolerance,
            details={"kind": report.kind.value, "stderr": report.stderr, **report.details},
            **extra,
        )


class VerificationReport(BaseModel):
    model: str
    seed: int
    config_path: Optional[str] = None
    created_at: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))
    duration_s: float = 0.0
    checks: List[CheckResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failed(self) -> List[CheckResult]:
        return [check for check in self.checks if not check.passed]
