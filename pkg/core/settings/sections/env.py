from pydantic import Field, model_validator

from core.settings.base import SoatBaseSettings


class EnvSettings(SoatBaseSettings):
    """
    Synthetic world and episode generation.

    Defaults give 60 training worlds and 12 unseen worlds, each with 30 to
    60 navigable locations.
    """

    num_train_worlds: int = Field(default=60, ge=1)
    num_unseen_worlds: int = Field(default=12, ge=1)
    min_nodes: int = Field(default=30, ge=2)
    max_nodes: int = Field(default=60, ge=2)
    num_scene_classes: int = Field(default=8, ge=1)
    num_object_classes: int = Field(default=24, ge=1)
    min_objects_per_node: int = Field(default=0, ge=0)
    max_objects_per_node: int = Field(default=4, ge=0)
    noise_sigma: float = Field(default=0.1, ge=0.0)
    scene_feature_dim: int = Field(default=32, ge=1)
    object_feature_dim: int = Field(default=32, ge=1)
    train_episodes_per_world: int = Field(default=20, ge=1)
    val_seen_episodes_per_world: int = Field(default=2, ge=0)
    val_unseen_episodes_per_world: int = Field(default=10, ge=1)
    min_path_hops: int = Field(default=2, ge=1)
    max_path_hops: int = Field(default=5, ge=1)
    object_mention_prob: float = Field(default=0.6, ge=0.0, le=1.0)
    connect_radius: float = Field(default=3.5, gt=0.0)
    target_degree: float = Field(default=4.0, gt=0.0)

    @model_validator(mode="after")
    def _check_ranges(self) -> "EnvSettings":
        if self.min_nodes > self.max_nodes:
            raise ValueError("min_nodes must not exceed max_nodes")
        if self.min_objects_per_node > self.max_objects_per_node:
            raise ValueError("min_objects_per_node must not exceed max_objects_per_node")
        if self.min_path_hops > self.max_path_hops:
            raise ValueError("min_path_hops must not exceed max_path_hops")
        return self
