"""Events the orchestrator emits while a workflow runs."""

from dataclasses import dataclass, field
from datetime import datetime

WORKFLOW_STARTED = "workflow.started"
WORKFLOW_FINISHED = "workflow.finished"
STEP_STARTED = "workflow.step.started"
STEP_SUCCEEDED = "workflow.step.succeeded"
STEP_FAILED = "workflow.step.failed"

STEP_EVENTS = (STEP_STARTED, STEP_SUCCEEDED, STEP_FAILED)


@dataclass(frozen=True)
class Event:
    """
    One lifecycle event of a workflow run.

    payload carries the event-specific fields: step_count for
    workflow.started, step_name and attempts for step events, status and
    success_count for workflow.finished.
    """

    name: str
    run_id: str
    service: str
    operation: str | None
    timestamp: datetime
    payload: dict[str, object] = field(default_factory=dict)

    @property
    def step_name(self) -> str | None:
        value = self.payload.get("step_name")
        return None if value is None else str(value)
