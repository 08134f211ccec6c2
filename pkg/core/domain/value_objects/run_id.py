"""Run identifier."""

from dataclasses import dataclass
from uuid import UUID, uuid4


@dataclass(frozen=True)
class RunID:
    """Unique identifier for run tracing."""

    value: UUID

    @classmethod
    def generate(cls) -> "RunID":
        """Generate a new RunID."""
        return cls(value=uuid4())

    def __str__(self) -> str:
        return str(self.value)
