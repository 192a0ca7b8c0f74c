"""Machine-readable results of a verification run."""

import math
from typing import Dict, List, Optional

from pydantic import BaseModel, Field, field_validator

SCHEMA_VERSION = "1.0"


class CheckResult(BaseModel):
    id: str
    anchor: str
    mode: str
    residual: Optional[float] = None
    passed: bool
    gating: bool = True
    message: Optional[str] = None

    @field_validator("residual")
    @classmethod
    def finite_or_none(cls, value: Optional[float]) -> Optional[float]:
        if value is None or not math.isfinite(value):
            return None
        return float(value)


class VerificationReport(BaseModel):
    schema_version: str = SCHEMA_VERSION
    suite: str
    target: str
    seed: int
    tol: float
    points: int
    mode: str
    wall_time: float = 0.0
    passed: bool
    checks: List[CheckResult] = Field(default_factory=list)

    @field_validator("checks")
    @classmethod
    def sorted_by_id(cls, checks: List[CheckResult]) -> List[CheckResult]:
        return sorted(checks, key=lambda c: c.id)

    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if c.gating and not c.passed]

    def summary(self) -> str:
        gating = [c for c in self.checks if c.gating]
        passed = sum(c.passed for c in gating)
        return f"{passed}/{len(gating)} gating checks passed ({len(self.checks) - len(gating)} informational)"

    def to_json(self) -> str:
        return self.model_dump_json(indent=2) + "\n"


class CatalogItem(BaseModel):
    id: str
    description: str


class CatalogListing(BaseModel):
    entries: List[CatalogItem] = Field(default_factory=list)


class EvalResult(BaseModel):
    target: str
    expression: str
    point: Dict[str, float]
    value: float
