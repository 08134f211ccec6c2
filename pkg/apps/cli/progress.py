"""Step progress reporting for CLI workflows, fed by orchestrator events."""

from dataclasses import dataclass, field

from core.infrastructure.logging import get_logger
from orchestration import STEP_FAILED, STEP_SUCCEEDED, WORKFLOW_STARTED, Event, InMemoryEventBus

logger = get_logger("cli.progress")


@dataclass(frozen=True)
class StepOutcome:
    name: str
    succeeded: bool
    attempts: int


@dataclass
class StepProgress:
    """
    Counts finished steps of one workflow run and logs each with its position,
    e.g. 'step_progress: command=ablate, step=full, status=ok, attempts=1, done=6, total=7'.
    """

    command: str
    total: int = 0
    outcomes: list[StepOutcome] = field(default_factory=list)

    def attach(self, bus: InMemoryEventBus) -> "StepProgress":
        bus.subscribe(WORKFLOW_STARTED, self._on_started)
        bus.subscribe_many((STEP_SUCCEEDED, STEP_FAILED), self._on_step_finished)
        return self

    @property
    def done(self) -> int:
        return len(self.outcomes)

    @property
    def failed(self) -> list[str]:
        return [o.name for o in self.outcomes if not o.succeeded]

    async def _on_started(self, event: Event) -> None:
        self.total = int(event.payload.get("step_count", 0))
        self.outcomes.clear()

    async def _on_step_finished(self, event: Event) -> None:
        outcome = StepOutcome(
            name=event.step_name or "?",
            succeeded=event.name == STEP_SUCCEEDED,
            attempts=int(event.payload.get("attempts", 1)),
        )
        self.outcomes.append(outcome)
        log = logger.info if outcome.succeeded else logger.warning
        log(
            "step_progress: command=%s, step=%s, status=%s, attempts=%d, done=%d, total=%d",
            self.command,
            outcome.name,
            "ok" if outcome.succeeded else "failed",
            outcome.attempts,
            self.done,
            self.total,
        )
