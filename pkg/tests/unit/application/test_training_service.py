"""Tests for the training loop: determinism, checkpoints and resume."""

import numpy as np
import pytest

from core.application.services import (
    TrainingService,
    build_model,
    checkpoint_path,
    latest_checkpoint_path,
)
from core.data import NpzCheckpointRepository
from core.domain.exceptions import CheckpointError


def _trainer(dataset, settings, out_dir, variant=None):
    return TrainingService(
        dataset, settings, variant or settings.run.policy_variant, NpzCheckpointRepository(), out_dir
    )


class TestTrainingService:
    def test_writes_log_and_checkpoints(self, dataset, tiny_settings, tmp_path):
        trainer = _trainer(dataset, tiny_settings, tmp_path)
        result = trainer.train()

        records = trainer.log.read()
        assert [r.kind for r in records] == ["pretrain", "iteration", "iteration", "iteration"]
        assert [r.iteration for r in records[1:]] == [1, 2, 3]
        assert all(r.bc_episodes == 1 and r.pg_episodes == 1 for r in records[1:])
        assert {s.split for s in records[-1].evals} == {"val_seen", "val_unseen"}
        assert result.final_checkpoint == checkpoint_path(tmp_path, 3)
        assert latest_checkpoint_path(tmp_path).is_file()

    def test_same_seed_same_log_bytes(self, dataset, tiny_settings, tmp_path):
        first = _trainer(dataset, tiny_settings, tmp_path / "a")
        second = _trainer(dataset, tiny_settings, tmp_path / "b")
        first.train()
        second.train()
        assert first.log.log_path.read_bytes() == second.log.log_path.read_bytes()

    def test_resume_matches_uninterrupted_run(self, dataset, tiny_settings, tmp_path):
        full = _trainer(dataset, tiny_settings, tmp_path / "full")
        full.train()

        partial_dir = tmp_path / "partial"
        _trainer(dataset, tiny_settings.replace(iterations=1), partial_dir).train()
        resumed = _trainer(dataset, tiny_settings, partial_dir)
        resumed.train(resume_from=checkpoint_path(partial_dir, 1))

        assert resumed.log.log_path.read_bytes() == full.log.log_path.read_bytes()
        repo = NpzCheckpointRepository()
        a = repo.load(latest_checkpoint_path(tmp_path / "full"))
        b = repo.load(latest_checkpoint_path(partial_dir))
        assert all(np.array_equal(a.parameters[k], b.parameters[k]) for k in a.parameters)
        assert a.baseline == b.baseline

    def test_resume_rejects_other_variant(self, dataset, tiny_settings, tmp_path):
        _trainer(dataset, tiny_settings.replace(iterations=1), tmp_path).train()
        other = tiny_settings.replace(pattern="baseline")
        with pytest.raises(CheckpointError):
            _trainer(dataset, other, tmp_path).train(resume_from=checkpoint_path(tmp_path, 1))

    def test_parameters_change(self, dataset, tiny_settings, tmp_path):
        settings = tiny_settings.replace(iterations=1, pretrain=False)
        trainer = _trainer(dataset, settings, tmp_path)
        result = trainer.train()

        initial = build_model(settings, dataset).state_dict()
        trained = NpzCheckpointRepository().load(result.final_checkpoint).parameters
        assert any(not np.array_equal(initial[k], trained[k]) for k in initial)
        assert trainer.log.read()[0].kind == "iteration"

    def test_zero_learning_rate_leaves_parameters_untouched(self, dataset, tiny_settings, tmp_path):
        settings = tiny_settings.replace(iterations=2, pretrain=False, learning_rate=0.0)
        trainer = _trainer(dataset, settings, tmp_path)
        result = trainer.train()

        initial = build_model(settings, dataset).state_dict()
        trained = NpzCheckpointRepository().load(result.final_checkpoint).parameters
        assert set(initial) == set(trained)
        assert all(np.array_equal(initial[k], trained[k]) for k in initial)
        assert all(r.grad_norm > 0.0 for r in trainer.log.read())
