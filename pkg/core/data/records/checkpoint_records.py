"""Metadata stored next to the tensors of a checkpoint."""

from typing import Any, Dict, List

from pydantic import BaseModel, ConfigDict, Field

CHECKPOINT_FORMAT_VERSION = 1


class CheckpointMetaRecord(BaseModel):
    format_version: int
    config_echo: Dict[str, Any]
    iteration: int = Field(..., ge=0)
    baseline: float = 0.0
    variant: str = ""
    run_config: Dict[str, str] = Field(default_factory=dict)
    parameter_names: List[str]
    has_optimizer: bool = False

    model_config = ConfigDict(frozen=True, extra="forbid")
