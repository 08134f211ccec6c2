"""Tests for PolicyVariant names and parsing."""

import pytest

from core.domain.enums import MaskPattern
from core.domain.exceptions import ConfigError
from core.domain.value_objects import PolicyVariant


def test_pattern_defaults():
    assert PolicyVariant.for_pattern(MaskPattern.BASELINE).name == "baseline+noobj+noagg"
    assert PolicyVariant.for_pattern(MaskPattern.SELECTIVE_OBJECT).name == "selective-object+obj+agg"


@pytest.mark.parametrize(
    "name", ["all+obj+noagg", "selective-object+noobj+noagg", "object-only+obj+agg", "selective-scene+obj+agg"]
)
def test_parse_inverts_name(name):
    assert PolicyVariant.parse(name).name == name


def test_bare_pattern_uses_defaults():
    assert PolicyVariant.parse("all") == PolicyVariant.for_pattern(MaskPattern.ALL_ATTENTION)


@pytest.mark.parametrize("name", ["all+obj", "all+objects+agg", "nowhere+obj+agg", "all+noobj+agg", "baseline+obj+noagg"])
def test_invalid_names(name):
    with pytest.raises(ConfigError):
        PolicyVariant.parse(name)


def test_aggregation_needs_objects():
    with pytest.raises(ValueError):
        PolicyVariant(MaskPattern.ALL_ATTENTION, object_features=False, view_aggregation=True)


def test_raw_scene_scores_follow_aggregation():
    assert PolicyVariant.parse("all+obj+agg").raw_scene_scores
    assert not PolicyVariant.parse("all+obj+noagg").raw_scene_scores
