"""Tests for the encoder layer and its selective row refresh."""

import numpy as np
import pytest

from core.domain.enums import MaskPattern
from core.domain.exceptions import DimensionError
from core.domain.masks import build_mask, layout_from_observation
from core.nn import EncoderLayer, LinearLayer, Tensor2, encoder_layer_forward, grad_check, linear_forward, project_kv
from core.nn import functional as F


@pytest.fixture
def layer(rng) -> EncoderLayer:
    return EncoderLayer.create(rng, d_model=8, num_heads=2, d_ff=16, init_std=0.5)


def test_heads_must_divide_width(rng):
    with pytest.raises(ValueError):
        EncoderLayer.create(rng, d_model=10, num_heads=3, d_ff=8)


def test_linear_width_mismatch(rng):
    layer = LinearLayer.create(rng, 4, 2)
    with pytest.raises(DimensionError):
        linear_forward(Tensor2(np.ones((1, 3))), layer)


def test_rows_outside_update_set_pass_through(rng, layer):
    layout = layout_from_observation(3, 2, [2, 1])
    mask = build_mask(MaskPattern.SELECTIVE_OBJECT, layout)
    tokens = Tensor2(rng.normal(size=(layout.num_tokens, 8)))

    out = encoder_layer_forward(tokens, mask.matrix, layer, mask.update_set)

    frozen = [i for i in range(layout.num_tokens) if i not in mask.update_set]
    np.testing.assert_array_equal(out.data[frozen], tokens.data[frozen])
    assert not np.array_equal(out.data[list(mask.update_set)], tokens.data[list(mask.update_set)])


def test_frozen_kv_matches_recompute(rng, layer):
    layout = layout_from_observation(4, 2, [1, 1])
    mask = build_mask(MaskPattern.SELECTIVE_OBJECT, layout)
    tokens = Tensor2(rng.normal(size=(layout.num_tokens, 8)))
    frozen_rows = np.array(list(layout.instr_range))
    kv = project_kv(F.take_rows(tokens, frozen_rows), layer, frozen_rows)

    cached = encoder_layer_forward(tokens, mask.matrix, layer, mask.update_set, frozen_kv=kv)
    naive = encoder_layer_forward(tokens, mask.matrix, layer, mask.update_set)

    assert np.max(np.abs(cached.data - naive.data)) < 1e-12


def test_frozen_kv_rows_must_not_be_updated(rng, layer):
    layout = layout_from_observation(2, 1, [1])
    mask = build_mask(MaskPattern.ALL_ATTENTION, layout)
    tokens = Tensor2(rng.normal(size=(layout.num_tokens, 8)))
    rows = np.array([0])
    kv = project_kv(F.take_rows(tokens, rows), layer, rows)

    with pytest.raises(ValueError):
        encoder_layer_forward(tokens, mask.matrix, layer, mask.update_set, frozen_kv=kv)


def test_empty_update_set_returns_input(rng, layer):
    tokens = Tensor2(rng.normal(size=(3, 8)))
    out = encoder_layer_forward(tokens, np.zeros((3, 3), dtype=bool), layer, [])
    assert out is tokens


def test_encoder_layer_gradients(rng, layer):
    layout = layout_from_observation(3, 2, [1, 2])
    mask = build_mask(MaskPattern.SELECTIVE_OBJECT, layout)
    x = Tensor2(rng.normal(size=(layout.num_tokens, 8)))
    weights = Tensor2(rng.normal(size=(layout.num_tokens, 8)))

    def loss():
        return F.sum_all(F.mul(encoder_layer_forward(x, mask.matrix, layer, mask.update_set), weights))

    assert grad_check(loss, layer.named_parameters("layer"), abs_tol=1e-8) < 1e-4
