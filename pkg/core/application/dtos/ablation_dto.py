"""Ablation grid and verification DTOs."""

from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field


class MeanStderr(BaseModel):
    mean: float
    stderr: float
    n: int = Field(..., ge=0)

    model_config = ConfigDict(frozen=True)


class AblationCellResult(BaseModel):
    name: str
    variant: str
    pretrain: bool
    status: str = Field(..., description="success or failed")
    seeds: List[int] = Field(default_factory=list)
    metrics: Dict[str, MeanStderr] = Field(default_factory=dict)
    deltas_vs_baseline: Dict[str, float] = Field(default_factory=dict)
    error: Optional[str] = None

    model_config = ConfigDict(frozen=True)


class OrderingCheck(BaseModel):
    """A qualitative ordering between two cells; holds is None when a cell failed."""

    name: str
    left: str
    right: str
    metric: str
    left_value: Optional[float] = None
    right_value: Optional[float] = None
    holds: Optional[bool] = None

    model_config = ConfigDict(frozen=True)


class AblationReport(BaseModel):
    split: str
    seeds: List[int]
    cells: List[AblationCellResult]
    orderings: List[OrderingCheck] = Field(default_factory=list)

    model_config = ConfigDict(frozen=True)


class CheckResult(BaseModel):
    name: str
    passed: bool
    detail: str = ""

    model_config = ConfigDict(frozen=True)


class VerificationReport(BaseModel):
    checks: List[CheckResult]

    model_config = ConfigDict(frozen=True)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)
