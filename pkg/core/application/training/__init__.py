"""Optimization: AdamW, episode losses and the alignment pretraining proxy."""

from .losses import (
    EpisodeGradients,
    EpisodeLoss,
    bc_loss,
    episode_gradients,
    pg_loss,
    terminal_reward,
)
from .optimizer import AdamW, OptimizerState, clip_global_norm
from .pretrain import (
    PretrainReport,
    alignment_accuracy,
    alignment_loss,
    pretrain_alignment,
    pretrain_parameters,
)

__all__ = [
    "AdamW",
    "EpisodeGradients",
    "EpisodeLoss",
    "OptimizerState",
    "PretrainReport",
    "alignment_accuracy",
    "alignment_loss",
    "bc_loss",
    "clip_global_norm",
    "episode_gradients",
    "pg_loss",
    "pretrain_alignment",
    "pretrain_parameters",
    "terminal_reward",
]
