"""Tests for dataset generation and loading through the service."""

import pytest

from core.application.services import DatasetService, summary
from core.data import JsonlDatasetRepository
from core.domain.exceptions import DataError


def test_generate_then_load(tmp_path, tiny_env):
    service = DatasetService(JsonlDatasetRepository(tmp_path / "toy"))
    service.generate(tiny_env, seed=1, max_instruction_len=32)
    dataset = service.load(expected_env=tiny_env)

    counts = summary(dataset)
    assert counts["train_worlds"] == 2
    assert counts["unseen_worlds"] == 1
    assert counts["train_episodes"] == 8


def test_generate_refuses_existing(tmp_path, tiny_env):
    service = DatasetService(JsonlDatasetRepository(tmp_path / "toy"))
    service.generate(tiny_env, seed=1, max_instruction_len=32)
    with pytest.raises(DataError):
        service.generate(tiny_env, seed=1, max_instruction_len=32)
    service.generate(tiny_env, seed=2, max_instruction_len=32, force=True)


def test_load_rejects_other_env(tmp_path, tiny_env):
    service = DatasetService(JsonlDatasetRepository(tmp_path / "toy"))
    service.generate(tiny_env, seed=1, max_instruction_len=32)
    with pytest.raises(DataError, match="num_train_worlds"):
        service.load(expected_env=tiny_env.model_copy(update={"num_train_worlds": 5}))
