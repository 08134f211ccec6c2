"""Episode: a start/goal pair on a world with its reference path and instruction."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Episode:
    """Path-instruction pair."""

    episode_id: str
    world_id: str
    start: int
    goal: int
    path: tuple[int, ...]
    instruction: tuple[int, ...]
    object_ref_count: int
    noise_seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "path", tuple(int(n) for n in self.path))
        object.__setattr__(self, "instruction", tuple(int(t) for t in self.instruction))
        if not self.path:
            raise ValueError(f"Episode {self.episode_id} has an empty reference path")
        if self.path[0] != self.start or self.path[-1] != self.goal:
            raise ValueError(f"Episode {self.episode_id}: reference path must run from start to goal")
        if not self.instruction:
            raise ValueError(f"Episode {self.episode_id} has an empty instruction")
        if self.object_ref_count < 0:
            raise ValueError("object_ref_count must be non-negative")

    @property
    def num_hops(self) -> int:
        return len(self.path) - 1
