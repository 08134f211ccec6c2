"""Token layout of one multimodal transformer input: <s, I, V, G>."""

from dataclasses import dataclass


@dataclass(frozen=True)
class TokenLayout:
    """
    Index assignment for the state, instruction, scene and object tokens.

    Token order is state (1 slot), instruction (num_instr slots), scene
    (num_views + 1 slots, the last being the stop token) and objects grouped
    by owning view. When has_scene_features is False the scene range holds
    only the stop token.
    """

    num_instr: int
    num_views: int
    object_owner: tuple[int, ...] = ()
    has_scene_features: bool = True

    def __post_init__(self) -> None:
        if self.num_instr < 0 or self.num_views < 0:
            raise ValueError(
                f"Token counts must be non-negative, got num_instr={self.num_instr}, "
                f"num_views={self.num_views}"
            )
        owners = tuple(int(o) for o in self.object_owner)
        object.__setattr__(self, "object_owner", owners)
        for owner in owners:
            if not 0 <= owner < self.num_views:
                raise ValueError(f"Object owner {owner} outside views 0..{self.num_views - 1}")
        if any(later < earlier for earlier, later in zip(owners, owners[1:])):
            raise ValueError("Object tokens must be grouped by owning view in view order")

    @property
    def state_index(self) -> int:
        return 0

    @property
    def instr_range(self) -> range:
        return range(1, 1 + self.num_instr)

    @property
    def num_scene_slots(self) -> int:
        return self.num_views + 1 if self.has_scene_features else 1

    @property
    def scene_range(self) -> range:
        start = 1 + self.num_instr
        return range(start, start + self.num_scene_slots)

    @property
    def stop_index(self) -> int:
        return self.scene_range[-1]

    @property
    def num_objects(self) -> int:
        return len(self.object_owner)

    @property
    def object_range(self) -> range:
        start = self.scene_range.stop
        return range(start, start + self.num_objects)

    @property
    def num_tokens(self) -> int:
        return self.object_range.stop

    def scene_index_of_view(self, view: int) -> int:
        """Token index of the scene slot of a view (view == num_views is stop)."""
        if view == self.num_views:
            return self.stop_index
        if not self.has_scene_features:
            raise ValueError("Layout has no scene slots for navigable views")
        return self.scene_range.start + view

    def objects_of_view(self, view: int) -> list[int]:
        """Positions (0-based, within the object range) of objects owned by view."""
        return [i for i, owner in enumerate(self.object_owner) if owner == view]

    def owner_of_token(self, token_index: int) -> int:
        """Owning view of an object token."""
        if token_index not in self.object_range:
            raise ValueError(f"Token {token_index} is not an object token")
        return self.object_owner[token_index - self.object_range.start]
