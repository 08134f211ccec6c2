"""Application layer interfaces."""
from abc import ABC, abstractmethod
from pathlib import Path
from typing import List

from core.application.commands import RecordRunCommand
from core.application.dtos import MetricReport, RunRecordDTO
from core.application.training.checkpoint import TrainingCheckpoint
from core.env import NavDataset


class IDatasetRepository(ABC):
    """
    Interface for dataset persistence.

    A dataset is the vocabulary, the feature synthesizer parameters, every
    world and the three split episode lists, plus a manifest.
    """

    @abstractmethod
    def exists(self) -> bool:
        """True when a manifest is already present."""
        pass

    @abstractmethod
    def save(self, dataset: NavDataset, force: bool = False) -> Path:
        """
        Write the dataset and its manifest.

        Args:
            dataset: generated dataset
            force: overwrite an existing dataset

        Returns:
            Path of the manifest

        Raises:
            DataError: if a dataset exists and force is False
        """
        pass

    @abstractmethod
    def load(self) -> NavDataset:
        """
        Read and validate the dataset.

        Raises:
            DatasetFormatError: on unknown versions, count or hash mismatches
        """
        pass


class ICheckpointRepository(ABC):
    """Interface for model checkpoint persistence."""

    @abstractmethod
    def save(self, path: Path, checkpoint: TrainingCheckpoint) -> Path:
        pass

    @abstractmethod
    def load(self, path: Path) -> TrainingCheckpoint:
        """
        Raises:
            CheckpointError: if the file is missing or malformed
        """
        pass


class IReportRepository(ABC):
    """Interface for metric report files."""

    @abstractmethod
    def save(self, path: Path, report: MetricReport) -> Path:
        pass

    @abstractmethod
    def load(self, path: Path) -> MetricReport:
        pass


class IRunLedger(ABC):
    """Interface for recording CLI runs."""

    @abstractmethod
    async def record_run(self, command: RecordRunCommand) -> RunRecordDTO:
        """
        Record a run.

        Args:
            command: Record run command

        Returns:
            Run record DTO
        """
        pass

    @abstractmethod
    async def list_runs(self) -> List[RunRecordDTO]:
        pass
