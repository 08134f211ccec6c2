"""Application DTOs."""

from .ablation_dto import (
    AblationCellResult,
    AblationReport,
    CheckResult,
    MeanStderr,
    OrderingCheck,
    VerificationReport,
)
from .metrics_dto import (
    METRIC_NAMES,
    REPORT_FORMAT_VERSION,
    EpisodeMetrics,
    MetricAggregate,
    MetricDelta,
    MetricReport,
    ReportComparison,
)
from .run_dto import RunRecordDTO
from .train_dto import EvalSummary, PretrainLogRecord, TimingRecord, TrainLogRecord

__all__ = [
    "AblationCellResult",
    "AblationReport",
    "CheckResult",
    "EpisodeMetrics",
    "EvalSummary",
    "METRIC_NAMES",
    "MeanStderr",
    "MetricAggregate",
    "MetricDelta",
    "MetricReport",
    "OrderingCheck",
    "PretrainLogRecord",
    "REPORT_FORMAT_VERSION",
    "ReportComparison",
    "RunRecordDTO",
    "TimingRecord",
    "TrainLogRecord",
    "VerificationReport",
]
