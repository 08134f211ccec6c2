"""Line records of a metric report file: header, one row per episode, aggregate footer."""

from typing import Dict, Literal, Optional

from pydantic import BaseModel, ConfigDict

from core.application.dtos import EpisodeMetrics, MetricAggregate


class ReportHeaderRecord(BaseModel):
    kind: Literal["header"] = "header"
    format_version: int
    split: str
    policy: str
    variant: str
    seed: int
    checkpoint: Optional[str] = None
    object_heavy_threshold: int

    model_config = ConfigDict(frozen=True, extra="forbid")


class ReportRowRecord(BaseModel):
    kind: Literal["row"] = "row"
    row: EpisodeMetrics

    model_config = ConfigDict(frozen=True, extra="forbid", ser_json_inf_nan="constants")


class ReportFooterRecord(BaseModel):
    kind: Literal["aggregate"] = "aggregate"
    aggregate: MetricAggregate
    strata: Dict[str, MetricAggregate]

    model_config = ConfigDict(frozen=True, extra="forbid", ser_json_inf_nan="constants")
