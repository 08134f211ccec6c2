"""
Run commands.

Commands for recording run tracking.
"""
from dataclasses import dataclass, field
from datetime import datetime
from typing import Dict, Optional

from core.domain.enums import RunStatus
from core.domain.value_objects import RunID


@dataclass
class RecordRunCommand:
    """Command to record one CLI run."""

    run_id: RunID
    command: str
    status: RunStatus
    started_at: datetime
    finished_at: Optional[datetime] = None
    exit_code: Optional[int] = None
    details: Dict[str, str] = field(default_factory=dict)
