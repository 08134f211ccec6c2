from typing import Literal

from pydantic import Field

from core.settings.base import SoatBaseSettings


class EvalSettings(SoatBaseSettings):
    """Evaluation runner settings."""

    split: Literal["train", "val_seen", "val_unseen"] = "val_unseen"
    policy: Literal["model", "teacher", "random"] = "model"
    object_heavy_threshold: int = Field(default=6, ge=0)
    max_eval_episodes: int = Field(default=0, ge=0, description="0 evaluates the whole split")
