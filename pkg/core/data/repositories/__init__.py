"""Repository implementations."""

from .jsonl_dataset_repository import JsonlDatasetRepository
from .jsonl_report_repository import JsonlReportRepository
from .jsonl_run_ledger import JsonlRunLedger
from .npz_checkpoint_repository import NpzCheckpointRepository
from .training_log import TrainingLog

__all__ = [
    "JsonlDatasetRepository",
    "JsonlReportRepository",
    "JsonlRunLedger",
    "NpzCheckpointRepository",
    "TrainingLog",
]
