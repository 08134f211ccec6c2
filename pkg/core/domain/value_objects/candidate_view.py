"""Candidate view: one scene feature and zero or more object features."""

from dataclasses import dataclass, field

import numpy as np

from .direction import Direction


@dataclass(frozen=True, eq=False)
class CandidateView:
    """One navigable direction (or the stop pseudo-view) as seen by the agent."""

    view_id: int
    scene_feature: np.ndarray
    object_features: tuple[np.ndarray, ...] = ()
    direction: Direction = field(default_factory=Direction)
    target_node: int = -1
    is_stop: bool = False

    def __post_init__(self) -> None:
        scene = np.asarray(self.scene_feature, dtype=np.float64)
        if scene.ndim != 1:
            raise ValueError(f"Scene feature must be a vector, got shape {scene.shape}")
        objects = tuple(np.asarray(o, dtype=np.float64) for o in self.object_features)
        if self.is_stop and (objects or np.any(scene != 0.0)):
            raise ValueError("Stop pseudo-view must have an all-zeros scene feature and no objects")
        object.__setattr__(self, "scene_feature", scene)
        object.__setattr__(self, "object_features", objects)

    @property
    def num_objects(self) -> int:
        return len(self.object_features)

    @classmethod
    def stop(cls, view_id: int, node: int, scene_dim: int) -> "CandidateView":
        """The stop pseudo-view located at the current node."""
        return cls(
            view_id=view_id,
            scene_feature=np.zeros(scene_dim),
            direction=Direction(),
            target_node=node,
            is_stop=True,
        )

    def with_objects(self, object_features: tuple[np.ndarray, ...]) -> "CandidateView":
        """Copy of this view with a different object list."""
        return CandidateView(
            view_id=self.view_id,
            scene_feature=self.scene_feature,
            object_features=object_features,
            direction=self.direction,
            target_node=self.target_node,
            is_stop=self.is_stop,
        )
