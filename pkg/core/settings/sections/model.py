from typing import Literal

from pydantic import Field, model_validator

from core.settings.base import SoatBaseSettings


class ModelSettings(SoatBaseSettings):
    """Transformer and policy dimensions (toy scale)."""

    d_model: int = Field(default=64, ge=4)
    num_heads: int = Field(default=4, ge=1)
    num_layers: int = Field(default=4, ge=1)
    d_ff: int = Field(default=256, ge=1)
    direction_dim: int = Field(default=16, ge=4)
    max_instruction_len: int = Field(default=64, ge=1)
    ln_eps: float = Field(default=1e-12, gt=0.0)
    init_std: float = Field(default=0.02, gt=0.0)
    dtype: Literal["float64", "float32"] = "float64"

    @model_validator(mode="after")
    def _check_dims(self) -> "ModelSettings":
        if self.d_model % self.num_heads:
            raise ValueError("d_model must be divisible by num_heads")
        if self.direction_dim % 4:
            raise ValueError("direction_dim must be a multiple of 4")
        return self
