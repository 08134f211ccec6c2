"""Persistence records."""

from .checkpoint_records import CHECKPOINT_FORMAT_VERSION, CheckpointMetaRecord
from .dataset_records import (
    DATASET_FORMAT_VERSION,
    EpisodeRecord,
    FeatureSynthRecord,
    GraphRecord,
    ManifestRecord,
    NodeRecord,
    ObjectRecord,
    SplitManifest,
    VocabRecord,
    WorldLineRecord,
)
from .report_records import ReportFooterRecord, ReportHeaderRecord, ReportRowRecord

__all__ = [
    "CHECKPOINT_FORMAT_VERSION",
    "CheckpointMetaRecord",
    "DATASET_FORMAT_VERSION",
    "EpisodeRecord",
    "FeatureSynthRecord",
    "GraphRecord",
    "ManifestRecord",
    "NodeRecord",
    "ObjectRecord",
    "ReportFooterRecord",
    "ReportHeaderRecord",
    "ReportRowRecord",
    "SplitManifest",
    "VocabRecord",
    "WorldLineRecord",
]
