"""Append-only training log (deterministic) and its wall-time sidecar."""

from pathlib import Path
from typing import List, Union

from pydantic import TypeAdapter, ValidationError

from core.application.dtos import PretrainLogRecord, TimingRecord, TrainLogRecord
from core.domain.exceptions import DatasetFormatError

LogRecord = Union[PretrainLogRecord, TrainLogRecord]
_LOG_ADAPTER = TypeAdapter(LogRecord)


class TrainingLog:
    """
    training_log.jsonl holds losses and eval summaries only, so two runs with
    the same seed produce identical bytes; timing.jsonl holds wall time.
    """

    def __init__(self, directory: Path) -> None:
        self._dir = Path(directory)
        self.log_path = self._dir / "training_log.jsonl"
        self.timing_path = self._dir / "timing.jsonl"

    def append(self, record: LogRecord, wall_seconds: float | None = None) -> None:
        self._dir.mkdir(parents=True, exist_ok=True)
        with open(self.log_path, "a", encoding="utf-8") as fh:
            fh.write(record.model_dump_json() + "\n")
        if wall_seconds is not None:
            timing = TimingRecord(iteration=record.iteration, wall_seconds=wall_seconds)
            with open(self.timing_path, "a", encoding="utf-8") as fh:
                fh.write(timing.model_dump_json() + "\n")

    def read(self) -> List[LogRecord]:
        if not self.log_path.is_file():
            return []
        records = []
        for lineno, line in enumerate(self.log_path.read_text(encoding="utf-8").splitlines(), start=1):
            if not line.strip():
                continue
            try:
                records.append(_LOG_ADAPTER.validate_json(line))
            except ValidationError as exc:
                raise DatasetFormatError(f"{self.log_path}:{lineno}: malformed log record: {exc}") from exc
        return records

    def reset(self) -> None:
        for path in (self.log_path, self.timing_path):
            if path.exists():
                path.unlink()

    def truncate_after(self, iteration: int) -> None:
        """Drop records past iteration (resume from a checkpoint taken at iteration)."""
        for path in (self.log_path, self.timing_path):
            if not path.is_file():
                continue
            kept = []
            for line in path.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                if TypeAdapter(dict).validate_json(line).get("iteration", 0) <= iteration:
                    kept.append(line)
            path.write_text("".join(line + "\n" for line in kept), encoding="utf-8")
