"""Tests for token layouts and attention mask construction."""

import numpy as np
import pytest

from core.domain.enums import MaskPattern
from core.domain.exceptions import ConfigError, PatternLayoutMismatchError
from core.domain.masks import build_mask, full_mask, layout_from_observation
from core.domain.value_objects import TokenLayout


@pytest.fixture
def layout() -> TokenLayout:
    # 3 instruction tokens, 2 navigable views owning 2 and 1 objects
    return layout_from_observation(3, 2, [2, 1])


class TestTokenLayout:
    def test_ranges(self, layout):
        assert layout.state_index == 0
        assert list(layout.instr_range) == [1, 2, 3]
        assert list(layout.scene_range) == [4, 5, 6]
        assert layout.stop_index == 6
        assert list(layout.object_range) == [7, 8, 9]
        assert layout.num_tokens == 10

    def test_object_ownership(self, layout):
        assert layout.objects_of_view(0) == [0, 1]
        assert layout.objects_of_view(1) == [2]
        assert layout.owner_of_token(9) == 1
        assert layout.scene_index_of_view(2) == layout.stop_index

    def test_objects_must_be_grouped(self):
        with pytest.raises(ValueError):
            TokenLayout(num_instr=1, num_views=2, object_owner=(1, 0))

    def test_without_scene_features_only_stop_slot(self):
        layout = layout_from_observation(2, 3, [1, 0, 2], has_scene_features=False)
        assert layout.num_scene_slots == 1
        assert layout.stop_index == 3
        with pytest.raises(ValueError):
            layout.scene_index_of_view(0)

    def test_counts_must_match_views(self):
        with pytest.raises(ValueError):
            layout_from_observation(2, 2, [1])


class TestBuildMask:
    @pytest.mark.parametrize(
        "pattern, expected",
        [
            (MaskPattern.BASELINE, [0, 4, 5, 6]),
            (MaskPattern.ALL_ATTENTION, [0, 4, 5, 6, 7, 8, 9]),
            (MaskPattern.SELECTIVE_OBJECT, [0, 7, 8, 9]),
            (MaskPattern.SELECTIVE_SCENE, [0, 4, 5, 6]),
        ],
    )
    def test_update_sets(self, layout, pattern, expected):
        assert list(build_mask(pattern, layout).update_set) == expected

    def test_instruction_rows_never_query(self, layout):
        for pattern in (MaskPattern.BASELINE, MaskPattern.ALL_ATTENTION, MaskPattern.SELECTIVE_OBJECT):
            matrix = build_mask(pattern, layout).matrix
            assert not matrix[list(layout.instr_range)].any()

    def test_update_rows_see_every_token(self, layout):
        mask = build_mask(MaskPattern.SELECTIVE_OBJECT, layout)
        assert mask.query_rows().all()

    def test_object_only_requires_sceneless_layout(self, layout):
        with pytest.raises(PatternLayoutMismatchError):
            build_mask(MaskPattern.OBJECT_ONLY, layout)

    def test_object_only_updates_state_and_objects(self):
        layout = layout_from_observation(2, 2, [1, 1], has_scene_features=False)
        mask = build_mask(MaskPattern.OBJECT_ONLY, layout)
        assert list(mask.update_set) == [0, 4, 5]

    def test_scene_pattern_rejects_sceneless_layout(self):
        layout = layout_from_observation(2, 2, [1, 1], has_scene_features=False)
        with pytest.raises(PatternLayoutMismatchError):
            build_mask(MaskPattern.SELECTIVE_OBJECT, layout)

    def test_mask_is_read_only(self, layout):
        mask = build_mask(MaskPattern.ALL_ATTENTION, layout)
        with pytest.raises(ValueError):
            mask.matrix[0, 0] = False

    def test_full_mask(self):
        mask = full_mask(4)
        assert mask.matrix.all()
        assert mask.update_set == (0, 1, 2, 3)

    def test_masks_compare_by_value(self, layout):
        assert build_mask(MaskPattern.BASELINE, layout) == build_mask(MaskPattern.SELECTIVE_SCENE, layout)
        assert build_mask(MaskPattern.BASELINE, layout) != build_mask(MaskPattern.ALL_ATTENTION, layout)


def _token_map(old: TokenLayout, new: TokenLayout, order: list[int]) -> np.ndarray:
    """For each token of new (views reordered so new view j is old view order[j]), its index in old."""
    index = [old.state_index, *old.instr_range]
    if new.has_scene_features:
        index.extend(old.scene_index_of_view(v) for v in order)
    index.append(old.stop_index)
    for v in order:
        index.extend(old.object_range.start + i for i in old.objects_of_view(v))
    assert len(index) == new.num_tokens
    return np.array(index)


class TestViewPermutation:
    @pytest.mark.parametrize(
        "pattern, has_scene_features",
        [
            (MaskPattern.BASELINE, True),
            (MaskPattern.ALL_ATTENTION, True),
            (MaskPattern.SELECTIVE_OBJECT, True),
            (MaskPattern.SELECTIVE_SCENE, True),
            (MaskPattern.OBJECT_ONLY, False),
        ],
    )
    def test_reordering_views_permutes_the_mask(self, rng, pattern, has_scene_features):
        for _ in range(10):
            num_views = int(rng.integers(1, 5))
            counts = [int(c) for c in rng.integers(0, 4, size=num_views)]
            order = [int(v) for v in rng.permutation(num_views)]
            old = layout_from_observation(3, num_views, counts, has_scene_features)
            new = layout_from_observation(3, num_views, [counts[v] for v in order], has_scene_features)

            index = _token_map(old, new, order)
            old_mask, new_mask = build_mask(pattern, old), build_mask(pattern, new)
            np.testing.assert_array_equal(new_mask.matrix, old_mask.matrix[np.ix_(index, index)])
            assert sorted(index[list(new_mask.update_set)]) == sorted(old_mask.update_set)


def test_unknown_pattern_is_config_error():
    with pytest.raises(ConfigError):
        MaskPattern.parse("everything")


def test_mask_matrix_dtype(layout):
    assert build_mask(MaskPattern.ALL_ATTENTION, layout).matrix.dtype == np.bool_
