"""Application services."""
from .ablation_service import ABLATION_CELLS, AblationCell, AblationService, render_table
from .dataset_service import DatasetService, summary
from .evaluation_service import (
    EvaluationService,
    build_report,
    compare_reports,
    stratify_by_object_refs,
    summarize,
)
from .training_service import (
    TrainingResult,
    TrainingService,
    build_model,
    checkpoint_path,
    latest_checkpoint_path,
    restore_model,
)
from .verification_service import VerificationService, run_checks

__all__ = [
    "ABLATION_CELLS",
    "AblationCell",
    "AblationService",
    "DatasetService",
    "EvaluationService",
    "TrainingResult",
    "TrainingService",
    "VerificationService",
    "build_model",
    "build_report",
    "checkpoint_path",
    "compare_reports",
    "latest_checkpoint_path",
    "render_table",
    "restore_model",
    "run_checks",
    "stratify_by_object_refs",
    "summarize",
    "summary",
]
