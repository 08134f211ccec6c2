"""Orchestration layer - workflow orchestration with eventing."""

from core.application.interfaces import IRunLedger

from .bus import ANY_EVENT, EventBusProtocol, InMemoryEventBus
from .events import (
    STEP_EVENTS,
    STEP_FAILED,
    STEP_STARTED,
    STEP_SUCCEEDED,
    WORKFLOW_FINISHED,
    WORKFLOW_STARTED,
    Event,
)
from .models import ExecutionContext, StepResult, WorkflowResult
from .orchestrator import Orchestrator
from .workflow import Activity, RetryPolicy, WorkflowDefinition, WorkflowStep

__all__ = [
    "ANY_EVENT",
    "Activity",
    "Event",
    "EventBusProtocol",
    "ExecutionContext",
    "InMemoryEventBus",
    "Orchestrator",
    "RetryPolicy",
    "STEP_EVENTS",
    "STEP_FAILED",
    "STEP_STARTED",
    "STEP_SUCCEEDED",
    "StepResult",
    "WORKFLOW_FINISHED",
    "WORKFLOW_STARTED",
    "WorkflowDefinition",
    "WorkflowResult",
    "WorkflowStep",
    "create_default_orchestrator",
]


def create_default_orchestrator(
    service: str,
    operation: str | None = None,
    run_ledger: IRunLedger | None = None,
    event_bus: EventBusProtocol | None = None,
) -> Orchestrator:
    """Create an orchestrator; a fresh InMemoryEventBus is used when event_bus is omitted.

    Args:
        service: Service name
        operation: Optional operation name
        run_ledger: Optional run ledger
        event_bus: Bus with the caller's subscribers already attached

    Returns:
        Orchestrator instance
    """
    return Orchestrator(
        event_bus=event_bus if event_bus is not None else InMemoryEventBus(),
        service=service,
        operation=operation,
        run_ledger=run_ledger,
    )
