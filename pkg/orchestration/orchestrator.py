"""Orchestrator - runs workflows with eventing and run tracking."""

import asyncio
from datetime import datetime, timezone

from core.application.commands import RecordRunCommand
from core.application.interfaces import IRunLedger
from core.domain.enums import RunStatus
from core.domain.value_objects import RunID
from core.infrastructure.logging import get_logger

from .bus import EventBusProtocol
from .events import (
    STEP_FAILED,
    STEP_STARTED,
    STEP_SUCCEEDED,
    WORKFLOW_FINISHED,
    WORKFLOW_STARTED,
    Event,
)
from .models import ExecutionContext, StepResult, WorkflowResult
from .workflow import WorkflowDefinition, WorkflowStep


def _now() -> datetime:
    return datetime.now(timezone.utc)


class Orchestrator:
    """Orchestrator for running workflows with eventing and run tracking."""

    def __init__(
        self,
        event_bus: EventBusProtocol,
        service: str,
        operation: str | None = None,
        run_ledger: IRunLedger | None = None,
    ) -> None:
        """Initialize orchestrator.

        Args:
            event_bus: EventBusProtocol for publishing events
            service: Service name
            operation: Optional operation name
            run_ledger: Optional ledger receiving one record per workflow run
        """
        self._run_ledger = run_ledger
        self._event_bus = event_bus
        self._service = service
        self._operation = operation
        self._logger = get_logger("orchestration.orchestrator")

    async def run(
        self,
        workflow: WorkflowDefinition,
        initial_input: object | None = None,
        run_id: RunID | None = None,
        details: dict[str, str] | None = None,
    ) -> WorkflowResult:
        """Run a workflow.

        Args:
            workflow: WorkflowDefinition to run
            initial_input: Optional initial input for the first step
            run_id: Identifier to record the run under (generated if omitted)
            details: Extra key/value pairs stored in the run ledger

        Returns:
            WorkflowResult with execution details
        """
        started_at = _now()
        run_id = run_id or RunID.generate()
        operation = self._operation or workflow.operation

        ctx = ExecutionContext(
            run_id=run_id,
            service=self._service,
            operation=operation,
            started_at=started_at,
        )

        self._logger.info(
            "workflow_starting: run_id=%s, workflow_name=%s, service=%s, operation=%s, step_count=%d",
            run_id,
            workflow.name,
            self._service,
            operation,
            len(workflow.steps),
        )

        await self._publish_event(
            name=WORKFLOW_STARTED,
            run_id=run_id,
            payload={"workflow_name": workflow.name, "step_count": len(workflow.steps)},
        )

        step_results: list[StepResult] = []
        last_result = initial_input
        workflow_succeeded = True

        for step in workflow.steps:
            step_result = await self._execute_step(ctx, step, last_result)
            step_results.append(step_result)

            if not step_result.success:
                workflow_succeeded = False
                self._logger.warning(
                    "workflow_step_failed: run_id=%s, step_name=%s, error=%s, continue_on_failure=%s",
                    run_id,
                    step.name,
                    step_result.error,
                    step.continue_on_failure,
                )
                if not step.continue_on_failure:
                    break
                continue

            last_result = step_result.output

        finished_at = _now()
        final_status = RunStatus.SUCCESS if workflow_succeeded else RunStatus.FAILED

        result = WorkflowResult(
            run_id=run_id,
            service=self._service,
            operation=operation,
            status=final_status,
            started_at=started_at,
            finished_at=finished_at,
            steps=step_results,
        )

        if self._run_ledger is not None:
            ledger_details = dict(details or {})
            ledger_details["steps"] = str(len(step_results))
            ledger_details["failed_steps"] = ",".join(s.name for s in step_results if not s.success)
            await self._run_ledger.record_run(
                RecordRunCommand(
                    run_id=run_id,
                    command=operation or workflow.name,
                    status=final_status,
                    started_at=started_at,
                    finished_at=finished_at,
                    exit_code=result.exit_code,
                    details=ledger_details,
                )
            )

        await self._publish_event(
            name=WORKFLOW_FINISHED,
            run_id=run_id,
            payload={
                "workflow_name": workflow.name,
                "status": final_status.value,
                "step_count": len(step_results),
                "success_count": sum(1 for s in step_results if s.success),
            },
        )

        duration_ms = int((finished_at - started_at).total_seconds() * 1000)
        self._logger.info(
            "workflow_finished: run_id=%s, workflow_name=%s, status=%s, duration_ms=%d",
            run_id,
            workflow.name,
            final_status.value,
            duration_ms,
        )

        return result

    async def _execute_step(
        self, ctx: ExecutionContext, step: WorkflowStep, input_: object | None
    ) -> StepResult:
        """Execute a single workflow step with retry logic.

        Only exceptions listed in the step's retry_on are retried; any other
        failure ends the step on its first attempt.
        """
        step_started_at = _now()
        step_name = step.name
        policy = step.retry_policy

        await self._publish_event(
            name=STEP_STARTED,
            run_id=ctx.run_id,
            payload={"step_name": step_name},
        )

        attempts = 0
        last_error: Exception | None = None

        for attempt in range(1, policy.max_attempts + 1):
            attempts = attempt
            try:
                output = await step.activity(ctx, input_)

                duration_ms = int((_now() - step_started_at).total_seconds() * 1000)
                step_result = StepResult(
                    name=step_name,
                    success=True,
                    attempts=attempts,
                    duration_ms=duration_ms,
                    output=output,
                )

                await self._publish_event(
                    name=STEP_SUCCEEDED,
                    run_id=ctx.run_id,
                    payload={"step_name": step_name, "attempts": attempts},
                )

                return step_result

            except Exception as exc:
                last_error = exc
                self._logger.warning(
                    "step_attempt_failed: run_id=%s, step_name=%s, attempt=%d, max_attempts=%d, "
                    "error_type=%s, error=%s",
                    ctx.run_id,
                    step_name,
                    attempt,
                    policy.max_attempts,
                    type(exc).__name__,
                    exc,
                )
                if not isinstance(exc, policy.retry_on):
                    break

                if attempt < policy.max_attempts:
                    if policy.backoff_seconds > 0:
                        await asyncio.sleep(policy.backoff_seconds)

        duration_ms = int((_now() - step_started_at).total_seconds() * 1000)
        error_str = str(last_error) if last_error else "Unknown error"

        step_result = StepResult(
            name=step_name,
            success=False,
            attempts=attempts,
            duration_ms=duration_ms,
            error=error_str,
            exit_code=int(getattr(last_error, "exit_code", 1)),
        )

        await self._publish_event(
            name=STEP_FAILED,
            run_id=ctx.run_id,
            payload={
                "step_name": step_name,
                "attempts": attempts,
                "error": error_str,
            },
        )

        return step_result

    async def _publish_event(
        self, name: str, run_id: RunID, payload: dict[str, object]
    ) -> None:
        event = Event(
            name=name,
            run_id=str(run_id),
            service=self._service,
            operation=self._operation,
            timestamp=_now(),
            payload=payload,
        )
        await self._event_bus.publish(event)
