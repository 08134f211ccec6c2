"""Orchestration models - ExecutionContext, StepResult, WorkflowResult."""

from dataclasses import dataclass, field
from datetime import datetime

from core.domain.enums import RunStatus
from core.domain.value_objects import RunID


@dataclass
class ExecutionContext:
    """Context object for workflow execution."""

    run_id: RunID
    service: str
    operation: str | None
    started_at: datetime
    metadata: dict[str, object] = field(default_factory=dict)


@dataclass
class StepResult:
    """Result of a workflow step execution."""

    name: str
    success: bool
    attempts: int
    duration_ms: int
    error: str | None = None
    exit_code: int = 0
    output: object = None


@dataclass
class WorkflowResult:
    """Result of a workflow execution."""

    run_id: RunID
    service: str
    operation: str | None
    status: RunStatus
    started_at: datetime
    finished_at: datetime
    steps: list[StepResult]

    @property
    def exit_code(self) -> int:
        """Exit code of the first failed step, 0 when every step succeeded."""
        for step in self.steps:
            if not step.success:
                return step.exit_code
        return 0
