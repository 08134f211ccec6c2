"""Dataset generation and loading."""

from pathlib import Path

from core.application.interfaces import IDatasetRepository
from core.domain.enums import SplitName
from core.domain.exceptions import DataError
from core.env import NavDataset, generate_dataset
from core.infrastructure.logging import get_logger
from core.settings import EnvSettings

logger = get_logger(__name__)


class DatasetService:
    """Coordinates the environment generators with dataset persistence."""

    def __init__(self, repository: IDatasetRepository) -> None:
        self._repository = repository

    def generate(self, env: EnvSettings, seed: int, max_instruction_len: int, force: bool = False) -> Path:
        """
        Generate worlds and splits and write them.

        Raises:
            DataError: if a dataset already exists and force is False
        """
        return self.save(self.build(env, seed, max_instruction_len, force=force), force=force)

    def build(self, env: EnvSettings, seed: int, max_instruction_len: int, force: bool = False) -> NavDataset:
        """Generate in memory; refuses early when a dataset exists and force is False."""
        if self._repository.exists() and not force:
            raise DataError("Dataset already exists; pass --force to overwrite it")
        return generate_dataset(env, seed, max_instruction_len)

    def save(self, dataset: NavDataset, force: bool = False) -> Path:
        manifest = self._repository.save(dataset, force=force)
        logger.info("dataset_saved: manifest=%s, %s", manifest, ", ".join(f"{k}={v}" for k, v in summary(dataset).items()))
        return manifest

    def load(self, expected_env: EnvSettings | None = None) -> NavDataset:
        """
        Load the dataset, optionally refusing one generated with other env settings.

        Raises:
            DatasetFormatError: on a malformed dataset
            DataError: if the dataset's env parameters differ from expected_env
        """
        dataset = self._repository.load()
        if expected_env is not None:
            mismatched = sorted(
                key for key, value in expected_env.model_dump().items() if dataset.params.get(key) != value
            )
            if mismatched:
                raise DataError(f"Dataset was generated with different env settings: {', '.join(mismatched)}")
        return dataset


def summary(dataset: NavDataset) -> dict[str, int]:
    """World and episode counts per split."""
    counts = {
        "train_worlds": len(dataset.worlds_for(SplitName.TRAIN)),
        "unseen_worlds": len(dataset.worlds_for(SplitName.VAL_UNSEEN)),
    }
    counts.update({f"{split.value}_episodes": len(dataset.episodes(split)) for split in SplitName})
    return counts
