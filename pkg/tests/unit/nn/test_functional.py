"""Tests for the differentiable operations in core.nn.functional."""

import numpy as np
import pytest

from core.domain.exceptions import DegenerateMaskError, DimensionError, NumericError
from core.nn import GradTape, Parameter, Tensor2, grad_check
from core.nn import functional as F


def _param(rng: np.random.Generator, *shape: int) -> Parameter:
    return Parameter(rng.normal(size=shape))


class TestForward:
    def test_tensor_promotes_vectors_to_rows(self):
        assert Tensor2([1.0, 2.0, 3.0]).shape == (1, 3)
        assert Tensor2(5.0).shape == (1, 1)

    def test_matmul_shape_mismatch(self):
        with pytest.raises(DimensionError):
            F.matmul(Tensor2(np.ones((2, 3))), Tensor2(np.ones((2, 3))))

    def test_masked_softmax_gives_zero_weight(self):
        scores = Tensor2(np.array([[1.0, 5.0, 2.0]]))
        mask = np.array([[True, False, True]])

        probs = F.softmax_rows(scores, mask).data

        assert probs[0, 1] == 0.0
        assert probs.sum() == pytest.approx(1.0)

    def test_attention_rejects_empty_query_row(self, rng):
        q, k, v = (Tensor2(rng.normal(size=(2, 4))) for _ in range(3))
        mask = np.array([[True, True], [False, False]])

        with pytest.raises(DegenerateMaskError):
            F.masked_attention(q, k, v, mask)

    def test_attention_single_key_copies_value(self, rng):
        q = Tensor2(rng.normal(size=(1, 4)))
        k = Tensor2(rng.normal(size=(3, 4)))
        v = Tensor2(rng.normal(size=(3, 4)))
        mask = np.array([[False, True, False]])

        out = F.masked_attention(q, k, v, mask)

        np.testing.assert_array_equal(out.data, v.data[1:2])

    def test_layer_norm_rejects_non_positive_epsilon(self):
        x = Tensor2(np.ones((1, 4)))
        with pytest.raises(ValueError):
            F.layer_norm(x, Tensor2(np.ones((1, 4))), Tensor2(np.zeros((1, 4))), 0.0)

    def test_assemble_rows_requires_full_cover(self):
        with pytest.raises(ValueError):
            F.assemble_rows(3, [(np.array([0, 1]), Tensor2(np.ones((2, 2))))])

    def test_scatter_rows_keeps_other_rows_bitwise(self, rng):
        base = Tensor2(rng.normal(size=(4, 3)))
        values = Tensor2(rng.normal(size=(2, 3)))

        out = F.scatter_rows(base, [1, 3], values)

        np.testing.assert_array_equal(out.data[[0, 2]], base.data[[0, 2]])
        np.testing.assert_array_equal(out.data[[1, 3]], values.data)


class TestTape:
    def test_outputs_track_parameters_without_a_tape(self, rng):
        w = _param(rng, 3, 3)
        out = F.matmul(Tensor2(rng.normal(size=(2, 3))), w)
        assert out.requires_grad

    def test_repeated_rows_accumulate(self):
        table = Parameter(np.arange(6.0).reshape(3, 2))
        with GradTape() as tape:
            loss = F.sum_all(F.take_rows(table, [0, 0, 2]))
        tape.backward(loss)

        np.testing.assert_array_equal(tape.grad(table), [[2.0, 2.0], [0.0, 0.0], [1.0, 1.0]])

    def test_parameter_grads_fill_untouched_with_zeros(self, rng):
        used, unused = _param(rng, 2, 2), _param(rng, 2, 2)
        with GradTape() as tape:
            loss = F.sum_all(used)
        tape.backward(loss)

        grads = tape.parameter_grads({"used": used, "unused": unused})

        np.testing.assert_array_equal(grads["used"], np.ones((2, 2)))
        np.testing.assert_array_equal(grads["unused"], np.zeros((2, 2)))

    def test_non_finite_loss_raises(self):
        w = Parameter(np.array([[np.inf]]))
        with GradTape() as tape:
            loss = F.sum_all(w)
        with pytest.raises(NumericError):
            tape.backward(loss)


class TestGradients:
    """Central-difference checks of every op's backward closure."""

    def test_matmul_add_gelu(self, rng):
        w = _param(rng, 4, 3)
        b = _param(rng, 1, 3)
        x = Tensor2(rng.normal(size=(5, 4)))
        weights = Tensor2(rng.normal(size=(5, 3)))

        def loss():
            return F.sum_all(F.mul(F.gelu(F.add(F.matmul(x, w), b)), weights))

        assert grad_check(loss, {"w": w, "b": b}, abs_tol=1e-8) < 1e-5

    def test_layer_norm(self, rng):
        x = _param(rng, 3, 6)
        gamma = Parameter(rng.normal(size=(1, 6)))
        beta = _param(rng, 1, 6)
        weights = Tensor2(rng.normal(size=(3, 6)))

        def loss():
            return F.sum_all(F.mul(F.layer_norm(x, gamma, beta, 1e-12), weights))

        assert grad_check(loss, {"x": x, "gamma": gamma, "beta": beta}, abs_tol=1e-8) < 1e-5

    def test_masked_attention(self, rng):
        q, k, v = _param(rng, 2, 4), _param(rng, 3, 4), _param(rng, 3, 4)
        mask = np.array([[True, False, True], [True, True, True]])
        weights = Tensor2(rng.normal(size=(2, 4)))

        def loss():
            return F.sum_all(F.mul(F.masked_attention(q, k, v, mask), weights))

        assert grad_check(loss, {"q": q, "k": k, "v": v}, abs_tol=1e-8) < 1e-5

    def test_log_softmax_pick(self, rng):
        a = _param(rng, 1, 5)

        def loss():
            return F.scale(F.pick(F.log_softmax_rows(a), 0, 2), -1.0)

        assert grad_check(loss, {"a": a}, abs_tol=1e-8) < 1e-5

    def test_concat_transpose_take_cols(self, rng):
        a, b = _param(rng, 2, 3), _param(rng, 2, 2)
        weights = Tensor2(rng.normal(size=(3, 2)))

        def loss():
            joined = F.concat_cols([a, b])
            return F.sum_all(F.mul(F.transpose(F.take_cols(joined, [0, 2, 4])), weights))

        assert grad_check(loss, {"a": a, "b": b}, abs_tol=1e-8) < 1e-5

    def test_epsilon_out_of_range(self, rng):
        a = _param(rng, 1, 2)
        with pytest.raises(ValueError):
            grad_check(lambda: F.sum_all(a), {"a": a}, epsilon=0.1)

    def test_report_is_logged_with_deferred_arguments(self, rng, log_records):
        a = _param(rng, 1, 2)
        grad_check(lambda: F.sum_all(F.mul(a, a)), {"a": a})
        [record] = [r for r in log_records if r.msg.startswith("grad_check_done:")]
        assert len(record.args) == 4
        assert record.getMessage().startswith("grad_check_done: entries=2,")
