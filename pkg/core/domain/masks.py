"""
Attention masks for the multimodal transformer.

Instruction tokens are never queries: the instruction is encoded once per
episode and only serves as keys and values afterwards. Which visual tokens
are refreshed depends on the pattern:

    baseline          {s} + V
    all               {s} + V + G
    selective-object  {s} + G      (scene tokens frozen)
    selective-scene   {s} + V      (object tokens frozen)
    object-only       {s} + G      (no scene tokens; stop slot kept as a key)

Every update row may attend to every token in the layout.
"""
from collections.abc import Sequence

import numpy as np

from .enums import MaskPattern
from .exceptions import PatternLayoutMismatchError
from .value_objects import AttentionMask, TokenLayout


def layout_from_observation(
    num_instr: int,
    num_views: int,
    objects_per_view: Sequence[int],
    has_scene_features: bool = True,
) -> TokenLayout:
    """
    Build the token layout for one timestep.

    The stop slot is appended to the scene range internally, so num_views
    counts navigable views only.

    Raises:
        ValueError: on negative counts or a per-view list of the wrong length
    """
    if num_instr < 0 or num_views < 0:
        raise ValueError(f"Negative token count: num_instr={num_instr}, num_views={num_views}")
    if len(objects_per_view) != num_views:
        raise ValueError(
            f"objects_per_view has {len(objects_per_view)} entries for {num_views} views"
        )
    owners: list[int] = []
    for view, count in enumerate(objects_per_view):
        if count < 0:
            raise ValueError(f"Negative object count {count} for view {view}")
        owners.extend([view] * int(count))
    return TokenLayout(
        num_instr=num_instr,
        num_views=num_views,
        object_owner=tuple(owners),
        has_scene_features=has_scene_features,
    )


def update_set_for(pattern: MaskPattern, layout: TokenLayout) -> list[int]:
    """Token indices refreshed by every encoder layer under pattern."""
    if pattern is MaskPattern.OBJECT_ONLY:
        if layout.has_scene_features:
            raise PatternLayoutMismatchError(
                "object-only pattern requires a layout without scene slots"
            )
    elif not layout.has_scene_features:
        raise PatternLayoutMismatchError(
            f"pattern '{pattern.value}' requires scene slots in the layout"
        )

    rows = [layout.state_index]
    if pattern in (MaskPattern.BASELINE, MaskPattern.ALL_ATTENTION, MaskPattern.SELECTIVE_SCENE):
        rows.extend(layout.scene_range)
    if pattern in (MaskPattern.ALL_ATTENTION, MaskPattern.SELECTIVE_OBJECT, MaskPattern.OBJECT_ONLY):
        rows.extend(layout.object_range)
    return rows


def build_mask(pattern: MaskPattern, layout: TokenLayout) -> AttentionMask:
    """
    Construct the attention mask and update set for pattern over layout.

    Raises:
        PatternLayoutMismatchError: object-only with scene slots present, or
            a scene pattern over a layout without scene slots
    """
    update_set = update_set_for(pattern, layout)
    matrix = np.zeros((layout.num_tokens, layout.num_tokens), dtype=bool)
    matrix[update_set, :] = True
    return AttentionMask(matrix=matrix, update_set=tuple(update_set))


def full_mask(num_tokens: int) -> AttentionMask:
    """All tokens query all tokens (instruction encoding at episode start)."""
    return AttentionMask(
        matrix=np.ones((num_tokens, num_tokens), dtype=bool),
        update_set=tuple(range(num_tokens)),
    )
