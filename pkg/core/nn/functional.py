"""
Differentiable operations on Tensor2.

Each op computes its forward value with numpy and, when a tape is active and
an input tracks gradients, records a backward closure. Shapes are always 2-D;
binary elementwise ops broadcast (1, n), (m, 1) and (1, 1) operands.
"""
from collections.abc import Sequence
import math

import numpy as np
from scipy import special

from core.domain.exceptions import DegenerateMaskError, DimensionError, NumericError

from .tensor import BackwardFn, Tensor2, active_tape

MASK_FILL = -1e9
_INV_SQRT2 = 1.0 / math.sqrt(2.0)
_INV_SQRT2PI = 1.0 / math.sqrt(2.0 * math.pi)


def _as_tensor(x: Tensor2 | np.ndarray | float) -> Tensor2:
    return x if isinstance(x, Tensor2) else Tensor2(x)


def _emit(data: np.ndarray, inputs: Sequence[Tensor2], backward: BackwardFn) -> Tensor2:
    tracks = any(t.requires_grad for t in inputs)
    out = Tensor2(data, requires_grad=tracks)
    tape = active_tape()
    if tracks and tape is not None:
        tape.record(out, inputs, backward)
    return out


def _unbroadcast(grad: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    if grad.shape == shape:
        return grad
    axes = tuple(i for i, (g, s) in enumerate(zip(grad.shape, shape)) if s == 1 and g != 1)
    return grad.sum(axis=axes, keepdims=True)


def constant(data: object, dtype: np.dtype | type | None = None) -> Tensor2:
    """A tensor that never receives gradients."""
    return Tensor2(data, requires_grad=False, dtype=dtype)


def matmul(a: Tensor2, b: Tensor2) -> Tensor2:
    if a.cols != b.rows:
        raise DimensionError(f"matmul shape mismatch: {a.shape} @ {b.shape}")
    a_data, b_data = a.data, b.data

    def backward(g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return g @ b_data.T, a_data.T @ g

    return _emit(a_data @ b_data, (a, b), backward)


def add(a: Tensor2, b: Tensor2) -> Tensor2:
    a, b = _as_tensor(a), _as_tensor(b)
    a_shape, b_shape = a.shape, b.shape

    def backward(g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return _unbroadcast(g, a_shape), _unbroadcast(g, b_shape)

    try:
        data = a.data + b.data
    except ValueError as exc:
        raise DimensionError(f"add shape mismatch: {a_shape} + {b_shape}") from exc
    return _emit(data, (a, b), backward)


def sub(a: Tensor2, b: Tensor2) -> Tensor2:
    a, b = _as_tensor(a), _as_tensor(b)
    a_shape, b_shape = a.shape, b.shape

    def backward(g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return _unbroadcast(g, a_shape), -_unbroadcast(g, b_shape)

    try:
        data = a.data - b.data
    except ValueError as exc:
        raise DimensionError(f"sub shape mismatch: {a_shape} - {b_shape}") from exc
    return _emit(data, (a, b), backward)


def mul(a: Tensor2, b: Tensor2) -> Tensor2:
    """Elementwise product with broadcasting."""
    a, b = _as_tensor(a), _as_tensor(b)
    a_data, b_data = a.data, b.data

    def backward(g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return _unbroadcast(g * b_data, a_data.shape), _unbroadcast(g * a_data, b_data.shape)

    try:
        data = a_data * b_data
    except ValueError as exc:
        raise DimensionError(f"mul shape mismatch: {a.shape} * {b.shape}") from exc
    return _emit(data, (a, b), backward)


def scale(a: Tensor2, factor: float) -> Tensor2:
    def backward(g: np.ndarray) -> tuple[np.ndarray]:
        return (g * factor,)

    return _emit(a.data * factor, (a,), backward)


def transpose(a: Tensor2) -> Tensor2:
    def backward(g: np.ndarray) -> tuple[np.ndarray]:
        return (g.T,)

    return _emit(np.ascontiguousarray(a.data.T), (a,), backward)


def sum_all(a: Tensor2) -> Tensor2:
    shape = a.shape

    def backward(g: np.ndarray) -> tuple[np.ndarray]:
        return (np.broadcast_to(g, shape),)

    return _emit(a.data.sum(keepdims=True), (a,), backward)


def mean_all(a: Tensor2) -> Tensor2:
    return scale(sum_all(a), 1.0 / a.data.size)


def concat_rows(parts: Sequence[Tensor2]) -> Tensor2:
    parts = [p for p in parts if p.rows > 0] or list(parts[:1])
    cols = {p.cols for p in parts}
    if len(cols) != 1:
        raise DimensionError(f"concat_rows needs equal column counts, got {sorted(cols)}")
    bounds = np.cumsum([0] + [p.rows for p in parts])

    def backward(g: np.ndarray) -> list[np.ndarray]:
        return [g[bounds[i] : bounds[i + 1]] for i in range(len(parts))]

    return _emit(np.concatenate([p.data for p in parts], axis=0), parts, backward)


def concat_cols(parts: Sequence[Tensor2]) -> Tensor2:
    rows = {p.rows for p in parts}
    if len(rows) != 1:
        raise DimensionError(f"concat_cols needs equal row counts, got {sorted(rows)}")
    bounds = np.cumsum([0] + [p.cols for p in parts])

    def backward(g: np.ndarray) -> list[np.ndarray]:
        return [g[:, bounds[i] : bounds[i + 1]] for i in range(len(parts))]

    return _emit(np.concatenate([p.data for p in parts], axis=1), parts, backward)


def take_rows(a: Tensor2, rows: Sequence[int] | np.ndarray) -> Tensor2:
    """Row gather; repeated indices accumulate gradient (embedding lookup)."""
    idx = np.asarray(rows, dtype=np.int64)
    shape = a.shape

    def backward(g: np.ndarray) -> tuple[np.ndarray]:
        out = np.zeros(shape, dtype=g.dtype)
        np.add.at(out, idx, g)
        return (out,)

    return _emit(a.data[idx], (a,), backward)


def take_cols(a: Tensor2, cols: Sequence[int] | np.ndarray | slice) -> Tensor2:
    """Column gather; repeated indices accumulate gradient."""
    shape = a.shape
    if isinstance(cols, slice):
        idx = np.arange(shape[1])[cols]
    else:
        idx = np.asarray(cols, dtype=np.int64)

    def backward(g: np.ndarray) -> tuple[np.ndarray]:
        out = np.zeros(shape, dtype=g.dtype)
        np.add.at(out, (slice(None), idx), g)
        return (out,)

    return _emit(a.data[:, idx], (a,), backward)


def assemble_rows(num_rows: int, parts: Sequence[tuple[np.ndarray, Tensor2]]) -> Tensor2:
    """
    Build a num_rows matrix from disjoint row blocks: out[idx_i] = part_i.

    Every row must be covered exactly once. Values are copied bit-for-bit.
    """
    if not parts:
        raise ValueError("assemble_rows needs at least one part")
    cols = parts[0][1].cols
    covered = np.zeros(num_rows, dtype=np.int64)
    out = np.empty((num_rows, cols), dtype=parts[0][1].dtype)
    index_list = []
    for rows, tensor in parts:
        idx = np.asarray(rows, dtype=np.int64)
        if tensor.rows != len(idx) or tensor.cols != cols:
            raise DimensionError(
                f"assemble_rows block shape {tensor.shape} does not match {len(idx)} rows x {cols}"
            )
        covered[idx] += 1
        out[idx] = tensor.data
        index_list.append(idx)
    if not np.all(covered == 1):
        raise ValueError("assemble_rows parts must cover every row exactly once")

    def backward(g: np.ndarray) -> list[np.ndarray]:
        return [g[idx] for idx in index_list]

    return _emit(out, [t for _, t in parts], backward)


def scatter_rows(base: Tensor2, rows: Sequence[int] | np.ndarray, values: Tensor2) -> Tensor2:
    """Copy of base with rows replaced by values; other rows pass through unchanged."""
    idx = np.asarray(rows, dtype=np.int64)
    keep = np.setdiff1d(np.arange(base.rows), idx)
    return assemble_rows(base.rows, [(keep, take_rows(base, keep)), (idx, values)])


def gelu(a: Tensor2) -> Tensor2:
    """Exact GELU: x * Phi(x)."""
    x = a.data
    cdf = 0.5 * (1.0 + special.erf(x * _INV_SQRT2))

    def backward(g: np.ndarray) -> tuple[np.ndarray]:
        pdf = np.exp(-0.5 * x * x) * _INV_SQRT2PI
        return (g * (cdf + x * pdf),)

    return _emit(x * cdf, (a,), backward)


def layer_norm(x: Tensor2, gamma: Tensor2, beta: Tensor2, eps: float) -> Tensor2:
    """Row-wise layer normalization with affine parameters of shape (1, d)."""
    if eps <= 0:
        raise ValueError(f"layer-norm epsilon must be positive, got {eps}")
    if gamma.shape != (1, x.cols) or beta.shape != (1, x.cols):
        raise DimensionError(f"layer-norm parameters {gamma.shape} do not match width {x.cols}")
    data = x.data
    mu = data.mean(axis=1, keepdims=True)
    centered = data - mu
    var = (centered * centered).mean(axis=1, keepdims=True)
    inv_std = 1.0 / np.sqrt(var + eps)
    xhat = centered * inv_std
    g_data = gamma.data
    n = x.cols

    def backward(g: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        dgamma = (g * xhat).sum(axis=0, keepdims=True)
        dbeta = g.sum(axis=0, keepdims=True)
        dxhat = g * g_data
        dx = (inv_std / n) * (
            n * dxhat - dxhat.sum(axis=1, keepdims=True) - xhat * (dxhat * xhat).sum(axis=1, keepdims=True)
        )
        return dx, dgamma, dbeta

    return _emit(xhat * g_data + beta.data, (x, gamma, beta), backward)


def _masked_softmax_data(scores: np.ndarray, mask: np.ndarray | None) -> np.ndarray:
    if mask is None:
        shifted = scores - scores.max(axis=1, keepdims=True)
        e = np.exp(shifted)
    else:
        filled = np.where(mask, scores, MASK_FILL)
        shifted = filled - filled.max(axis=1, keepdims=True)
        e = np.exp(shifted) * mask
    return e / e.sum(axis=1, keepdims=True)


def _check_mask_rows(mask: np.ndarray) -> None:
    empty = np.flatnonzero(~mask.any(axis=1))
    if empty.size:
        raise DegenerateMaskError(f"Query rows {empty.tolist()} permit no keys")


def softmax_rows(a: Tensor2, mask: np.ndarray | None = None) -> Tensor2:
    """Row-wise softmax; masked entries receive exactly zero weight."""
    if mask is not None:
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != a.shape:
            raise DimensionError(f"softmax mask {mask.shape} does not match scores {a.shape}")
        _check_mask_rows(mask)
    p = _masked_softmax_data(a.data, mask)

    def backward(g: np.ndarray) -> tuple[np.ndarray]:
        return (p * (g - (g * p).sum(axis=1, keepdims=True)),)

    return _emit(p, (a,), backward)


def log_softmax_rows(a: Tensor2) -> Tensor2:
    data = a.data
    shifted = data - data.max(axis=1, keepdims=True)
    lse = np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    out = shifted - lse
    p = np.exp(out)

    def backward(g: np.ndarray) -> tuple[np.ndarray]:
        return (g - p * g.sum(axis=1, keepdims=True),)

    return _emit(out, (a,), backward)


def masked_attention(q: Tensor2, k: Tensor2, v: Tensor2, mask: np.ndarray) -> Tensor2:
    """
    Single-head scaled dot-product attention under a boolean mask.

    out_i = sum_j softmax_j(q_i . k_j / sqrt(d_head) over permitted j) v_j

    Raises:
        DimensionError: on inconsistent shapes
        DegenerateMaskError: if a query row permits no key
    """
    if q.cols != k.cols:
        raise DimensionError(f"query width {q.cols} != key width {k.cols}")
    if k.rows != v.rows:
        raise DimensionError(f"{k.rows} keys but {v.rows} values")
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != (q.rows, k.rows):
        raise DimensionError(f"mask shape {mask.shape} != ({q.rows}, {k.rows})")
    _check_mask_rows(mask)

    factor = 1.0 / math.sqrt(q.cols)
    q_data, k_data, v_data = q.data, k.data, v.data
    p = _masked_softmax_data((q_data @ k_data.T) * factor, mask)
    out = p @ v_data
    if not np.all(np.isfinite(out)):
        raise NumericError("Non-finite attention output")

    def backward(g: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        dv = p.T @ g
        dp = g @ v_data.T
        ds = p * (dp - (dp * p).sum(axis=1, keepdims=True)) * factor
        return ds @ k_data, ds.T @ q_data, dv

    return _emit(out, (q, k, v), backward)


def pick(a: Tensor2, row: int, col: int) -> Tensor2:
    """A single entry as a 1x1 tensor."""
    shape = a.shape

    def backward(g: np.ndarray) -> tuple[np.ndarray]:
        out = np.zeros(shape, dtype=g.dtype)
        out[row, col] = g[0, 0]
        return (out,)

    return _emit(a.data[row : row + 1, col : col + 1].copy(), (a,), backward)
