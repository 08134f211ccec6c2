"""The scene- and object-aware navigation agent."""

from .config import ModelConfig
from .model import SoatModel
from .policy import (
    aggregate_views,
    cached_step_equivalence,
    encode_instruction,
    encode_step,
    init_state,
    refine_state,
    resolve_variant,
    step,
)
from .rollout import Rollout, RolloutMode, RolloutStep, rollout
from .state import ActionDistribution, AgentState, Provenance

__all__ = [
    "ActionDistribution",
    "AgentState",
    "ModelConfig",
    "Provenance",
    "Rollout",
    "RolloutMode",
    "RolloutStep",
    "SoatModel",
    "aggregate_views",
    "cached_step_equivalence",
    "encode_instruction",
    "encode_step",
    "init_state",
    "refine_state",
    "resolve_variant",
    "rollout",
    "step",
]
