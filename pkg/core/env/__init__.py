"""Synthetic navigation environment: worlds, episodes, rendering and the shortest-path teacher."""

from .dataset import NavDataset, generate_dataset
from .episodes import instruction_for_path, sample_episode
from .features import AlignmentBatch, FeatureSynth
from .observation import relative_direction, render_observation
from .session import NavigationSession
from .teacher import teacher_action, teacher_next_node, teacher_path
from .vocab import VocabSpec
from .world import generate_world

__all__ = [
    "AlignmentBatch",
    "FeatureSynth",
    "NavDataset",
    "NavigationSession",
    "VocabSpec",
    "generate_dataset",
    "generate_world",
    "instruction_for_path",
    "relative_direction",
    "render_observation",
    "sample_episode",
    "teacher_action",
    "teacher_next_node",
    "teacher_path",
]
