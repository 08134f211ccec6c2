"""JSONL implementation of IRunLedger."""

import asyncio
from pathlib import Path
from typing import List

from core.application.commands import RecordRunCommand
from core.application.dtos import RunRecordDTO
from core.application.interfaces import IRunLedger


class JsonlRunLedger(IRunLedger):
    """Appends one RunRecordDTO per line to a jsonl file (runs.jsonl in the output directory by default)."""

    def __init__(self, directory: Path, filename: str = "runs.jsonl") -> None:
        self._path = Path(directory) / filename
        self._lock = asyncio.Lock()

    @classmethod
    def beside(cls, directory: Path) -> "JsonlRunLedger":
        """A ledger next to directory (<parent>/<name>.runs.jsonl) that leaves its contents untouched."""
        directory = Path(directory)
        return cls(directory.parent, f"{directory.name}.runs.jsonl")

    @property
    def path(self) -> Path:
        return self._path

    async def record_run(self, command: RecordRunCommand) -> RunRecordDTO:
        record = RunRecordDTO(
            run_id=str(command.run_id),
            command=command.command,
            status=command.status,
            started_at=command.started_at,
            finished_at=command.finished_at,
            exit_code=command.exit_code,
            details=dict(command.details),
        )
        async with self._lock:
            self._path.parent.mkdir(parents=True, exist_ok=True)
            with open(self._path, "a", encoding="utf-8") as fh:
                fh.write(record.model_dump_json() + "\n")
        return record

    async def list_runs(self) -> List[RunRecordDTO]:
        if not self._path.is_file():
            return []
        return [
            RunRecordDTO.model_validate_json(line)
            for line in self._path.read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]
