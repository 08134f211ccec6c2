"""Training log DTOs (one JSON object per line)."""

from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field


class EvalSummary(BaseModel):
    split: str
    count: int = Field(..., ge=0)
    success_rate: float
    spl: float
    ndtw: float
    navigation_error: float

    model_config = ConfigDict(frozen=True, ser_json_inf_nan="constants")


class PretrainLogRecord(BaseModel):
    kind: Literal["pretrain"] = "pretrain"
    iteration: int = 0
    steps: int
    final_loss: float
    scene_accuracy: float
    object_accuracy: float

    model_config = ConfigDict(frozen=True, ser_json_inf_nan="constants")


class TrainLogRecord(BaseModel):
    """Deterministic per-iteration record; wall time lives in the timing sidecar."""

    kind: Literal["iteration"] = "iteration"
    iteration: int = Field(..., ge=1)
    bc_episodes: int = Field(..., ge=0)
    pg_episodes: int = Field(..., ge=0)
    bc_loss: Optional[float] = None
    pg_loss: Optional[float] = None
    mean_return: Optional[float] = None
    entropy: Optional[float] = None
    baseline: float
    grad_norm: float
    learning_rate: float
    evals: List[EvalSummary] = Field(default_factory=list)

    model_config = ConfigDict(frozen=True, ser_json_inf_nan="constants")


class TimingRecord(BaseModel):
    iteration: int
    wall_seconds: float

    model_config = ConfigDict(frozen=True)
