from pydantic import Field

from core.settings.base import SoatBaseSettings


class TrainSettings(SoatBaseSettings):
    """
    Optimization settings.

    Full-scale runs use AdamW at a constant 1e-5, batch 16, 300k iterations,
    half of each batch behaviour cloning. The defaults keep the batch and
    the mix but use a larger rate and fewer iterations for a small model
    trained from scratch.
    """

    learning_rate: float = Field(default=3e-4, ge=0.0)
    batch_size: int = Field(default=16, ge=1)
    iterations: int = Field(default=20_000, ge=0)
    bc_fraction: float = Field(default=0.5, ge=0.0, le=1.0)
    weight_decay: float = Field(default=0.01, ge=0.0)
    beta1: float = Field(default=0.9, ge=0.0, lt=1.0)
    beta2: float = Field(default=0.999, ge=0.0, lt=1.0)
    adam_eps: float = Field(default=1e-8, gt=0.0)
    grad_clip: float = Field(default=5.0, gt=0.0)
    baseline_decay: float = Field(default=0.95, ge=0.0, le=1.0)
    entropy_weight: float = Field(default=0.0, ge=0.0)
    step_penalty: float = Field(default=0.01, ge=0.0)
    max_episode_steps: int = Field(default=15, ge=1)
    pretrain: bool = True
    pretrain_steps: int = Field(default=2_000, ge=0)
    pretrain_batch_size: int = Field(default=32, ge=2)
    pretrain_learning_rate: float = Field(default=1e-3, ge=0.0)
    eval_every: int = Field(default=1_000, ge=0)
    eval_episodes: int = Field(default=200, ge=1)
    checkpoint_every: int = Field(default=1_000, ge=0)
