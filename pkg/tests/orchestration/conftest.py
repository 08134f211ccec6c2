"""Fakes shared by the orchestration tests."""

import pytest

from core.application.commands import RecordRunCommand
from core.application.dtos import RunRecordDTO


class FakeRunLedger:
    """Fake IRunLedger keeping commands in memory."""

    def __init__(self) -> None:
        self.commands: list[RecordRunCommand] = []

    @property
    def last_command(self) -> RecordRunCommand | None:
        return self.commands[-1] if self.commands else None

    async def record_run(self, command: RecordRunCommand) -> RunRecordDTO:
        self.commands.append(command)
        return RunRecordDTO(
            run_id=str(command.run_id),
            command=command.command,
            status=command.status,
            started_at=command.started_at,
            finished_at=command.finished_at,
            exit_code=command.exit_code,
            details=command.details,
        )

    async def list_runs(self) -> list[RunRecordDTO]:
        return []


class FakeEventBus:
    """Fake EventBus storing published events."""

    def __init__(self) -> None:
        self.events: list[object] = []

    async def publish(self, event: object) -> None:
        self.events.append(event)

    def subscribe(self, event_name: str, handler: object) -> None:
        pass


@pytest.fixture
def run_ledger() -> FakeRunLedger:
    return FakeRunLedger()


@pytest.fixture
def event_bus() -> FakeEventBus:
    return FakeEventBus()
