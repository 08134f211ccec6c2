"""Tests for Orchestrator - retry functionality."""

import pytest

from core.domain.enums import RunStatus
from core.domain.exceptions import NumericError
from orchestration.models import ExecutionContext
from orchestration.orchestrator import Orchestrator
from orchestration.workflow import RetryPolicy, WorkflowDefinition, WorkflowStep


def _workflow(activity, policy: RetryPolicy) -> WorkflowDefinition:
    return WorkflowDefinition(
        name="test_workflow",
        service="test",
        operation="retry_test",
        steps=[WorkflowStep(name="flaky_step", activity=activity, retry_policy=policy)],
    )


@pytest.mark.asyncio
async def test_orchestrator_retry_success_after_failures(run_ledger, event_bus):
    """Transient I/O errors are retried."""
    counter = {"n": 0}

    async def flaky_step(ctx: ExecutionContext, input_: object | None) -> str:
        counter["n"] += 1
        if counter["n"] < 3:
            raise OSError("temporary error")
        return "ok"

    orchestrator = Orchestrator(event_bus=event_bus, service="test", run_ledger=run_ledger)
    result = await orchestrator.run(_workflow(flaky_step, RetryPolicy(max_attempts=3, backoff_seconds=0.0)))

    assert counter["n"] == 3
    assert result.status == RunStatus.SUCCESS
    assert result.steps[0].attempts == 3
    assert result.steps[0].output == "ok"
    assert run_ledger.last_command.status == RunStatus.SUCCESS


@pytest.mark.asyncio
async def test_orchestrator_retry_fails_after_max_attempts(run_ledger, event_bus):
    counter = {"n": 0}

    async def failing_step(ctx: ExecutionContext, input_: object | None) -> str:
        counter["n"] += 1
        raise OSError("always fails")

    orchestrator = Orchestrator(event_bus=event_bus, service="test", run_ledger=run_ledger)
    result = await orchestrator.run(_workflow(failing_step, RetryPolicy(max_attempts=2)))

    assert counter["n"] == 2
    assert result.status == RunStatus.FAILED
    assert result.steps[0].attempts == 2
    assert "always fails" in result.steps[0].error
    assert result.exit_code == 1
    assert run_ledger.last_command.status == RunStatus.FAILED


@pytest.mark.asyncio
async def test_domain_errors_are_not_retried(event_bus):
    counter = {"n": 0}

    async def diverging(ctx: ExecutionContext, input_: object | None) -> str:
        counter["n"] += 1
        raise NumericError("non-finite loss")

    result = await Orchestrator(event_bus=event_bus, service="test").run(
        _workflow(diverging, RetryPolicy(max_attempts=5))
    )

    assert counter["n"] == 1
    assert result.exit_code == NumericError.exit_code
