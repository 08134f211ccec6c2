"""Tests for npz checkpoints."""

import numpy as np
import pytest

from core.agent import ModelConfig, SoatModel
from core.application.training import AdamW
from core.application.training.checkpoint import TrainingCheckpoint
from core.data import NpzCheckpointRepository
from core.domain.exceptions import CheckpointError


@pytest.fixture
def checkpoint(model):
    optimizer = AdamW(model.named_parameters(), lr=0.01)
    return TrainingCheckpoint(
        model_config=model.config.to_dict(),
        parameters=model.state_dict(),
        iteration=12,
        optimizer=optimizer.state_dict(),
        baseline=-0.25,
        variant="selective-object+obj+agg",
        run_config={"seed": "0"},
    )


def test_round_trip(tmp_path, checkpoint):
    repo = NpzCheckpointRepository()
    path = repo.save(tmp_path / "checkpoints" / "iter_000012.npz", checkpoint)
    loaded = repo.load(path)

    assert loaded.iteration == 12
    assert loaded.baseline == -0.25
    assert loaded.variant == checkpoint.variant
    assert loaded.model_config == checkpoint.model_config
    assert loaded.parameters.keys() == checkpoint.parameters.keys()
    assert all(np.array_equal(loaded.parameters[k], v) for k, v in checkpoint.parameters.items())
    assert int(loaded.optimizer["step"]) == 0
    assert not list(path.parent.glob("*.tmp"))


def test_missing_file(tmp_path):
    with pytest.raises(CheckpointError):
        NpzCheckpointRepository().load(tmp_path / "absent.npz")


def test_not_a_checkpoint(tmp_path):
    path = tmp_path / "junk.npz"
    np.savez(path, weights=np.zeros(3))
    with pytest.raises(CheckpointError):
        NpzCheckpointRepository().load(path)


def test_config_mismatch_is_rejected_by_model(tmp_path, checkpoint, model_config):
    repo = NpzCheckpointRepository()
    loaded = repo.load(repo.save(tmp_path / "c.npz", checkpoint))
    bigger = ModelConfig.from_dict({**model_config.to_dict(), "d_model": 32})
    with pytest.raises(CheckpointError):
        SoatModel.create(bigger, seed=0).load_state_dict(loaded.parameters)
