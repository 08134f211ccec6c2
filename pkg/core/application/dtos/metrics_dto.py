"""Evaluation report DTOs."""

from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

REPORT_FORMAT_VERSION = 1
METRIC_NAMES = ("trajectory_length", "navigation_error", "success_rate", "spl", "ndtw", "sdtw")


class EpisodeMetrics(BaseModel):
    """One evaluated episode."""

    episode_id: str = Field(..., description="Episode identifier")
    world_id: str = Field(..., description="World the episode runs on")
    object_ref_count: int = Field(..., ge=0, description="Object words in the instruction")
    stratum: str = Field(..., description="object_heavy or object_light")
    trajectory_length: float = Field(..., ge=0, description="TL in meters")
    navigation_error: float = Field(..., ge=0, description="NE in meters (inf if unreachable)")
    success: int = Field(..., ge=0, le=1)
    spl: float = Field(..., ge=0, le=1)
    ndtw: float = Field(..., ge=0, le=1)
    sdtw: float = Field(..., ge=0, le=1)
    steps: int = Field(..., ge=0, description="Actions taken, stop included")
    stopped: bool = Field(..., description="Ended by an explicit stop")
    goal_reachable: bool = Field(default=True)

    model_config = ConfigDict(frozen=True, ser_json_inf_nan="constants")


class MetricAggregate(BaseModel):
    """Means over a set of rows."""

    count: int = Field(..., ge=0)
    trajectory_length: float = 0.0
    navigation_error: float = 0.0
    success_rate: float = 0.0
    spl: float = 0.0
    ndtw: float = 0.0
    sdtw: float = 0.0
    unreachable: int = Field(default=0, ge=0, description="Rows whose goal was unreachable")

    model_config = ConfigDict(frozen=True, ser_json_inf_nan="constants")

    @classmethod
    def from_rows(cls, rows: List[EpisodeMetrics]) -> "MetricAggregate":
        if not rows:
            return cls(count=0)
        n = len(rows)

        def mean(values: List[float]) -> float:
            return float(sum(values) / n)

        return cls(
            count=n,
            trajectory_length=mean([r.trajectory_length for r in rows]),
            navigation_error=mean([r.navigation_error for r in rows]),
            success_rate=mean([float(r.success) for r in rows]),
            spl=mean([r.spl for r in rows]),
            ndtw=mean([r.ndtw for r in rows]),
            sdtw=mean([r.sdtw for r in rows]),
            unreachable=sum(1 for r in rows if not r.goal_reachable),
        )

    def metric(self, name: str) -> float:
        return float(getattr(self, name))


class MetricReport(BaseModel):
    """Per-episode rows (sorted by episode id) plus split and strata aggregates."""

    format_version: int = Field(default=REPORT_FORMAT_VERSION)
    split: str
    policy: str = Field(..., description="model, teacher or random")
    variant: str = Field(..., description="Policy variant name")
    seed: int = 0
    checkpoint: Optional[str] = None
    object_heavy_threshold: int = 6
    rows: List[EpisodeMetrics] = Field(default_factory=list)
    aggregate: MetricAggregate
    strata: Dict[str, MetricAggregate] = Field(default_factory=dict)

    model_config = ConfigDict(frozen=True)


class MetricDelta(BaseModel):
    metric: str
    baseline: float
    candidate: float
    delta: float

    model_config = ConfigDict(frozen=True, ser_json_inf_nan="constants")


class ReportComparison(BaseModel):
    """Per-metric candidate minus baseline, overall and per stratum."""

    baseline_label: str
    candidate_label: str
    split: str
    overall: List[MetricDelta] = Field(default_factory=list)
    strata: Dict[str, List[MetricDelta]] = Field(default_factory=dict)

    model_config = ConfigDict(frozen=True)
