"""
Run DTO.

Data transfer object for run tracking.
"""
from datetime import datetime
from typing import Dict, Optional

from pydantic import BaseModel, ConfigDict, Field

from core.domain.enums import RunStatus


class RunRecordDTO(BaseModel):
    """One CLI command execution as recorded in the run ledger."""

    run_id: str = Field(..., description="Run identifier")
    command: str = Field(..., description="CLI command name")
    status: RunStatus
    started_at: datetime
    finished_at: Optional[datetime] = None
    exit_code: Optional[int] = None
    details: Dict[str, str] = Field(default_factory=dict)

    model_config = ConfigDict(frozen=True)
