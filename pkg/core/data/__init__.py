"""Data layer - persistence records, mappers and file repositories."""

from .mappers import EpisodeMapper, GraphMapper, WorldLineMapper
from .repositories import (
    JsonlDatasetRepository,
    JsonlReportRepository,
    JsonlRunLedger,
    NpzCheckpointRepository,
    TrainingLog,
)

__all__ = [
    "EpisodeMapper",
    "GraphMapper",
    "JsonlDatasetRepository",
    "JsonlReportRepository",
    "JsonlRunLedger",
    "NpzCheckpointRepository",
    "TrainingLog",
    "WorldLineMapper",
]
