"""
Dense layers: linear maps, layer normalization and the post-norm encoder layer.

The encoder layer refreshes only the rows in its update set; all other rows
are returned bit-identical and only serve as keys and values.
"""
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from core.domain.exceptions import DimensionError
from core.infrastructure.logging import get_logger

from . import functional as F
from .tensor import DEFAULT_DTYPE, Parameter, Tensor2

logger = get_logger(__name__)


@dataclass
class LinearLayer:
    """x @ weight + bias, weight shaped (in_dim, out_dim)."""

    weight: Parameter
    bias: Parameter | None = None

    @classmethod
    def create(
        cls,
        rng: np.random.Generator,
        in_dim: int,
        out_dim: int,
        bias: bool = True,
        std: float | None = None,
        dtype: type = DEFAULT_DTYPE,
    ) -> "LinearLayer":
        std = (1.0 / np.sqrt(in_dim)) if std is None else std
        weight = Parameter(rng.normal(0.0, std, size=(in_dim, out_dim)), dtype=dtype)
        b = Parameter(np.zeros((1, out_dim)), dtype=dtype) if bias else None
        return cls(weight=weight, bias=b)

    @property
    def in_dim(self) -> int:
        return self.weight.rows

    @property
    def out_dim(self) -> int:
        return self.weight.cols

    def named_parameters(self, prefix: str) -> dict[str, Parameter]:
        params = {f"{prefix}.weight": self.weight}
        if self.bias is not None:
            params[f"{prefix}.bias"] = self.bias
        return params


@dataclass
class LayerNormParams:
    gamma: Parameter
    beta: Parameter
    eps: float = 1e-12

    def __post_init__(self) -> None:
        if self.eps <= 0:
            raise ValueError(f"layer-norm epsilon must be positive, got {self.eps}")

    @classmethod
    def create(cls, dim: int, eps: float = 1e-12, dtype: type = DEFAULT_DTYPE) -> "LayerNormParams":
        return cls(
            gamma=Parameter(np.ones((1, dim)), dtype=dtype),
            beta=Parameter(np.zeros((1, dim)), dtype=dtype),
            eps=eps,
        )

    def named_parameters(self, prefix: str) -> dict[str, Parameter]:
        return {f"{prefix}.gamma": self.gamma, f"{prefix}.beta": self.beta}


@dataclass
class EncoderLayer:
    """Multi-head self-attention + feed-forward, post-norm (BERT convention)."""

    query: LinearLayer
    key: LinearLayer
    value: LinearLayer
    output: LinearLayer
    ff_in: LinearLayer
    ff_out: LinearLayer
    ln_attention: LayerNormParams
    ln_output: LayerNormParams
    num_heads: int

    def __post_init__(self) -> None:
        d = self.query.in_dim
        if d % self.num_heads:
            raise ValueError(f"hidden size {d} is not divisible by {self.num_heads} heads")

    @classmethod
    def create(
        cls,
        rng: np.random.Generator,
        d_model: int,
        num_heads: int,
        d_ff: int,
        ln_eps: float = 1e-12,
        init_std: float = 0.02,
        dtype: type = DEFAULT_DTYPE,
    ) -> "EncoderLayer":
        if d_model % num_heads:
            raise ValueError(f"hidden size {d_model} is not divisible by {num_heads} heads")

        def linear(i: int, o: int) -> LinearLayer:
            return LinearLayer.create(rng, i, o, std=init_std, dtype=dtype)

        return cls(
            query=linear(d_model, d_model),
            key=linear(d_model, d_model),
            value=linear(d_model, d_model),
            output=linear(d_model, d_model),
            ff_in=linear(d_model, d_ff),
            ff_out=linear(d_ff, d_model),
            ln_attention=LayerNormParams.create(d_model, ln_eps, dtype),
            ln_output=LayerNormParams.create(d_model, ln_eps, dtype),
            num_heads=num_heads,
        )

    @property
    def d_model(self) -> int:
        return self.query.in_dim

    @property
    def head_dim(self) -> int:
        return self.d_model // self.num_heads

    def named_parameters(self, prefix: str) -> dict[str, Parameter]:
        params: dict[str, Parameter] = {}
        params.update(self.query.named_parameters(f"{prefix}.attention.query"))
        params.update(self.key.named_parameters(f"{prefix}.attention.key"))
        params.update(self.value.named_parameters(f"{prefix}.attention.value"))
        params.update(self.output.named_parameters(f"{prefix}.attention.output"))
        params.update(self.ff_in.named_parameters(f"{prefix}.feed_forward.in"))
        params.update(self.ff_out.named_parameters(f"{prefix}.feed_forward.out"))
        params.update(self.ln_attention.named_parameters(f"{prefix}.ln_attention"))
        params.update(self.ln_output.named_parameters(f"{prefix}.ln_output"))
        return params


@dataclass(frozen=True)
class FrozenKV:
    """Precomputed key/value projections for a set of rows that are never queries."""

    rows: np.ndarray
    keys: Tensor2
    values: Tensor2


def linear_forward(x: Tensor2, layer: LinearLayer) -> Tensor2:
    """
    x @ W + b, bias broadcast over rows.

    Raises:
        DimensionError: if x.cols != layer.in_dim
    """
    if x.cols != layer.in_dim:
        raise DimensionError(f"linear input width {x.cols} != layer in_dim {layer.in_dim}")
    out = F.matmul(x, layer.weight)
    if layer.bias is not None:
        out = F.add(out, layer.bias)
    return out


def project_kv(rows_input: Tensor2, layer: EncoderLayer, rows: np.ndarray) -> FrozenKV:
    """Key/value projections of rows that stay frozen through the layer stack."""
    return FrozenKV(
        rows=np.asarray(rows, dtype=np.int64),
        keys=linear_forward(rows_input, layer.key),
        values=linear_forward(rows_input, layer.value),
    )


def multi_head_attention(
    q: Tensor2, k: Tensor2, v: Tensor2, mask: np.ndarray, num_heads: int
) -> Tensor2:
    """Split q/k/v columns into heads, attend per head, concatenate."""
    head_dim = q.cols // num_heads
    heads = []
    for h in range(num_heads):
        cols = slice(h * head_dim, (h + 1) * head_dim)
        heads.append(
            F.masked_attention(F.take_cols(q, cols), F.take_cols(k, cols), F.take_cols(v, cols), mask)
        )
    return heads[0] if num_heads == 1 else F.concat_cols(heads)


def encoder_layer_forward(
    tokens: Tensor2,
    mask: np.ndarray,
    layer: EncoderLayer,
    update_set: Sequence[int],
    frozen_kv: FrozenKV | None = None,
) -> Tensor2:
    """
    One encoder layer over tokens, refreshing only rows in update_set.

    mask is the full T x T permission matrix; rows outside update_set are
    ignored. When frozen_kv is given, keys/values for its rows are taken from
    it instead of being recomputed; those rows must lie outside update_set.
    """
    if tokens.cols != layer.d_model:
        raise DimensionError(f"token width {tokens.cols} != layer width {layer.d_model}")
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != (tokens.rows, tokens.rows):
        raise DimensionError(f"mask shape {mask.shape} does not match {tokens.rows} tokens")
    update = np.asarray(sorted(set(int(i) for i in update_set)), dtype=np.int64)
    if update.size == 0:
        logger.warning("encoder_layer_noop: update_set is empty, returning input unchanged")
        return tokens
    if update[0] < 0 or update[-1] >= tokens.rows:
        raise ValueError(f"update_set indices outside 0..{tokens.rows - 1}")

    x_u = F.take_rows(tokens, update)
    q = linear_forward(x_u, layer.query)
    if frozen_kv is None:
        k = linear_forward(tokens, layer.key)
        v = linear_forward(tokens, layer.value)
    else:
        if np.intersect1d(frozen_kv.rows, update).size:
            raise ValueError("cached key/value rows must not be refreshed by the layer")
        rest = np.setdiff1d(np.arange(tokens.rows), frozen_kv.rows)
        x_rest = F.take_rows(tokens, rest)
        k = F.assemble_rows(
            tokens.rows, [(frozen_kv.rows, frozen_kv.keys), (rest, linear_forward(x_rest, layer.key))]
        )
        v = F.assemble_rows(
            tokens.rows,
            [(frozen_kv.rows, frozen_kv.values), (rest, linear_forward(x_rest, layer.value))],
        )

    attended = multi_head_attention(q, k, v, mask[update], layer.num_heads)
    hidden = F.layer_norm(
        F.add(x_u, linear_forward(attended, layer.output)),
        layer.ln_attention.gamma,
        layer.ln_attention.beta,
        layer.ln_attention.eps,
    )
    ff = linear_forward(F.gelu(linear_forward(hidden, layer.ff_in)), layer.ff_out)
    out_u = F.layer_norm(
        F.add(hidden, ff), layer.ln_output.gamma, layer.ln_output.beta, layer.ln_output.eps
    )
    if out_u.rows == tokens.rows:
        return out_u
    return F.scatter_rows(tokens, update, out_u)
