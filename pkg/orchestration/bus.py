"""In-process event dispatch for workflow runs."""

from collections.abc import Awaitable, Callable, Iterable
from typing import Protocol

from core.infrastructure.logging import get_logger

from .events import Event

EventHandler = Callable[[Event], Awaitable[None]]

ANY_EVENT = "*"

logger = get_logger("orchestration.event_bus")


class EventBusProtocol(Protocol):
    async def publish(self, event: Event) -> None: ...

    def subscribe(self, event_name: str, handler: EventHandler) -> None: ...


class InMemoryEventBus:
    """
    Dispatches each event to the handlers registered for its name, then to
    the handlers registered for ANY_EVENT, in subscription order.

    A failing handler is logged and skipped; it never fails the workflow.
    """

    def __init__(self) -> None:
        self._handlers: dict[str, list[EventHandler]] = {}

    def subscribe(self, event_name: str, handler: EventHandler) -> None:
        self._handlers.setdefault(event_name, []).append(handler)

    def subscribe_many(self, event_names: Iterable[str], handler: EventHandler) -> None:
        for name in event_names:
            self.subscribe(name, handler)

    def handler_count(self, event_name: str) -> int:
        return len(self._handlers.get(event_name, ())) + len(self._handlers.get(ANY_EVENT, ()))

    async def publish(self, event: Event) -> None:
        handlers = [*self._handlers.get(event.name, ()), *self._handlers.get(ANY_EVENT, ())]
        for handler in handlers:
            try:
                await handler(event)
            except Exception as exc:
                logger.error(
                    "event_handler_failed: event=%s, run_id=%s, handler=%s, error=%s",
                    event.name,
                    event.run_id,
                    getattr(handler, "__qualname__", repr(handler)),
                    exc,
                    exc_info=True,
                )
