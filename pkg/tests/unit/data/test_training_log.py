"""Tests for the training log and the run ledger."""

from datetime import datetime, timezone

from core.application.commands import RecordRunCommand
from core.application.dtos import PretrainLogRecord, TrainLogRecord
from core.data import JsonlRunLedger, TrainingLog
from core.domain.enums import RunStatus
from core.domain.value_objects import RunID


def _record(iteration: int) -> TrainLogRecord:
    return TrainLogRecord(
        iteration=iteration,
        bc_episodes=1,
        pg_episodes=1,
        bc_loss=0.5,
        pg_loss=0.1,
        baseline=0.0,
        grad_norm=1.0,
        learning_rate=1e-3,
    )


class TestTrainingLog:
    def test_append_and_read(self, tmp_path):
        log = TrainingLog(tmp_path)
        log.append(PretrainLogRecord(steps=3, final_loss=1.0, scene_accuracy=0.5, object_accuracy=0.25))
        log.append(_record(1), wall_seconds=0.2)

        records = log.read()
        assert [r.kind for r in records] == ["pretrain", "iteration"]
        assert len(log.timing_path.read_text().splitlines()) == 1

    def test_truncate_after(self, tmp_path):
        log = TrainingLog(tmp_path)
        log.append(PretrainLogRecord(steps=3, final_loss=1.0, scene_accuracy=0.5, object_accuracy=0.25))
        for i in range(1, 5):
            log.append(_record(i), wall_seconds=0.1)
        log.truncate_after(2)

        assert [r.iteration for r in log.read()] == [0, 1, 2]
        assert len(log.timing_path.read_text().splitlines()) == 2

    def test_reset(self, tmp_path):
        log = TrainingLog(tmp_path)
        log.append(_record(1), wall_seconds=0.1)
        log.reset()
        assert log.read() == []
        assert not log.timing_path.exists()


async def test_run_ledger(tmp_path):
    ledger = JsonlRunLedger(tmp_path)
    started = datetime(2024, 1, 1, tzinfo=timezone.utc)
    await ledger.record_run(
        RecordRunCommand(run_id=RunID.generate(), command="train", status=RunStatus.RUNNING, started_at=started)
    )
    await ledger.record_run(
        RecordRunCommand(
            run_id=RunID.generate(),
            command="train",
            status=RunStatus.SUCCESS,
            started_at=started,
            finished_at=started,
            exit_code=0,
            details={"seed": "0"},
        )
    )
    runs = await ledger.list_runs()
    assert [r.status for r in runs] == [RunStatus.RUNNING, RunStatus.SUCCESS]
    assert runs[1].details == {"seed": "0"}


def test_ledger_beside_directory_stays_outside_it(tmp_path):
    ledger = JsonlRunLedger.beside(tmp_path / "data")
    assert ledger.path == tmp_path / "data.runs.jsonl"
    assert ledger.path.parent == tmp_path
