"""Model configuration: the resolved dimensions a SoatModel is built from."""

from dataclasses import asdict, dataclass
from typing import Any

import numpy as np

from core.domain.exceptions import ConfigError
from core.settings import EnvSettings, ModelSettings


@dataclass(frozen=True)
class ModelConfig:
    vocab_size: int
    scene_dim: int = 32
    object_dim: int = 32
    d_model: int = 64
    num_heads: int = 4
    num_layers: int = 4
    d_ff: int = 256
    direction_dim: int = 16
    max_instruction_len: int = 64
    ln_eps: float = 1e-12
    init_std: float = 0.02
    dtype: str = "float64"

    def __post_init__(self) -> None:
        if self.vocab_size < 1:
            raise ConfigError(f"vocab_size must be positive, got {self.vocab_size}")
        if self.d_model % self.num_heads:
            raise ConfigError(f"d_model={self.d_model} is not divisible by num_heads={self.num_heads}")
        if self.direction_dim <= 0 or self.direction_dim % 4:
            raise ConfigError(f"direction_dim must be a positive multiple of 4, got {self.direction_dim}")
        if self.dtype not in ("float64", "float32"):
            raise ConfigError(f"Unsupported dtype {self.dtype!r}")

    @classmethod
    def from_settings(cls, model: ModelSettings, env: EnvSettings, vocab_size: int) -> "ModelConfig":
        return cls(
            vocab_size=vocab_size,
            scene_dim=env.scene_feature_dim,
            object_dim=env.object_feature_dim,
            d_model=model.d_model,
            num_heads=model.num_heads,
            num_layers=model.num_layers,
            d_ff=model.d_ff,
            direction_dim=model.direction_dim,
            max_instruction_len=model.max_instruction_len,
            ln_eps=model.ln_eps,
            init_std=model.init_std,
            dtype=model.dtype,
        )

    @property
    def np_dtype(self) -> type:
        return np.float64 if self.dtype == "float64" else np.float32

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ModelConfig":
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"Unknown model config keys: {sorted(unknown)}")
        return cls(**data)
