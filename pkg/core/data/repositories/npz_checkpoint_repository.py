"""numpy .npz implementation of ICheckpointRepository."""

import os
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from core.application.interfaces import ICheckpointRepository
from core.application.training.checkpoint import TrainingCheckpoint
from core.domain.exceptions import CheckpointError

from ..records import CHECKPOINT_FORMAT_VERSION, CheckpointMetaRecord

META_KEY = "meta"
PARAM_PREFIX = "param/"
OPTIM_PREFIX = "optim/"


class NpzCheckpointRepository(ICheckpointRepository):
    """
    One self-describing .npz per checkpoint: a JSON metadata string (config
    echo, iteration, baseline) plus named parameter and optimizer arrays.
    """

    def save(self, path: Path, checkpoint: TrainingCheckpoint) -> Path:
        path = Path(path)
        meta = CheckpointMetaRecord(
            format_version=CHECKPOINT_FORMAT_VERSION,
            config_echo=checkpoint.model_config,
            iteration=checkpoint.iteration,
            baseline=checkpoint.baseline,
            variant=checkpoint.variant,
            run_config=checkpoint.run_config,
            parameter_names=sorted(checkpoint.parameters),
            has_optimizer=bool(checkpoint.optimizer),
        )
        arrays = {META_KEY: np.array(meta.model_dump_json())}
        arrays.update({PARAM_PREFIX + k: v for k, v in checkpoint.parameters.items()})
        arrays.update({OPTIM_PREFIX + k: v for k, v in checkpoint.optimizer.items()})
        tmp = path.with_name(path.name + ".tmp")
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(tmp, "wb") as fh:
                np.savez(fh, **arrays)
            os.replace(tmp, path)
        except OSError as exc:
            raise CheckpointError(f"Cannot write checkpoint {path}: {exc}") from exc
        return path

    def load(self, path: Path) -> TrainingCheckpoint:
        path = Path(path)
        if not path.is_file():
            raise CheckpointError(f"Checkpoint not found: {path}")
        try:
            with np.load(path, allow_pickle=False) as data:
                arrays = {key: data[key] for key in data.files}
        except (OSError, ValueError) as exc:
            raise CheckpointError(f"Cannot read checkpoint {path}: {exc}") from exc
        if META_KEY not in arrays:
            raise CheckpointError(f"Checkpoint {path} has no metadata")
        try:
            meta = CheckpointMetaRecord.model_validate_json(str(arrays[META_KEY]))
        except ValidationError as exc:
            raise CheckpointError(f"Malformed checkpoint metadata in {path}: {exc}") from exc
        if meta.format_version != CHECKPOINT_FORMAT_VERSION:
            raise CheckpointError(f"Unsupported checkpoint version {meta.format_version} in {path}")

        parameters = {k[len(PARAM_PREFIX):]: v for k, v in arrays.items() if k.startswith(PARAM_PREFIX)}
        if sorted(parameters) != meta.parameter_names:
            raise CheckpointError(f"Checkpoint {path} parameter list does not match its metadata")
        optimizer = {k[len(OPTIM_PREFIX):]: v for k, v in arrays.items() if k.startswith(OPTIM_PREFIX)}
        return TrainingCheckpoint(
            model_config=dict(meta.config_echo),
            parameters=parameters,
            iteration=meta.iteration,
            optimizer=optimizer,
            baseline=meta.baseline,
            variant=meta.variant,
            run_config=dict(meta.run_config),
        )
