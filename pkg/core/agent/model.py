"""
SoatModel: every learnable tensor of the navigation policy.

Parameter names are stable paths (e.g. 'encoder.layers.0.attention.query.weight')
used by checkpoints, gradient checks and the optimizer. The version counter
changes whenever parameters are modified in place, which invalidates cached
instruction keys/values.
"""
from collections.abc import Mapping

import numpy as np

from core.domain.exceptions import CheckpointError
from core.nn import EncoderLayer, LayerNormParams, LinearLayer, Parameter

from .config import ModelConfig


class SoatModel:
    """Embeddings, encoder stack, input projections, state refinement and scoring parameters."""

    def __init__(
        self,
        config: ModelConfig,
        word_embeddings: Parameter,
        position_embeddings: Parameter,
        embedding_norm: LayerNormParams,
        layers: list[EncoderLayer],
        scene_projection: LinearLayer,
        object_projection: LinearLayer,
        direction_projection: LinearLayer,
        refine_w1: LinearLayer,
        refine_w2: LinearLayer,
        empty_view_score: Parameter,
    ):
        self.config = config
        self.word_embeddings = word_embeddings
        self.position_embeddings = position_embeddings
        self.embedding_norm = embedding_norm
        self.layers = layers
        self.scene_projection = scene_projection
        self.object_projection = object_projection
        self.direction_projection = direction_projection
        self.refine_w1 = refine_w1
        self.refine_w2 = refine_w2
        self.empty_view_score = empty_view_score
        self.version = 0
        for name, param in self.named_parameters().items():
            param.name = name

    @classmethod
    def create(cls, config: ModelConfig, seed: int) -> "SoatModel":
        """Initialize every parameter from one seed (normal(0, init_std) for weights)."""
        rng = np.random.default_rng(seed)
        d, dtype, std = config.d_model, config.np_dtype, config.init_std

        def normal(*shape: int) -> Parameter:
            return Parameter(rng.normal(0.0, std, size=shape), dtype=dtype)

        def linear(i: int, o: int, bias: bool) -> LinearLayer:
            return LinearLayer.create(rng, i, o, bias=bias, std=std, dtype=dtype)

        return cls(
            config=config,
            word_embeddings=normal(config.vocab_size, d),
            position_embeddings=normal(config.max_instruction_len + 2, d),
            embedding_norm=LayerNormParams.create(d, config.ln_eps, dtype),
            layers=[
                EncoderLayer.create(rng, d, config.num_heads, config.d_ff, config.ln_eps, std, dtype)
                for _ in range(config.num_layers)
            ],
            # No bias: the all-zeros stop feature must project to exactly zero.
            scene_projection=linear(config.scene_dim, d, bias=False),
            object_projection=linear(config.object_dim, d, bias=True),
            direction_projection=linear(config.direction_dim, d, bias=False),
            refine_w1=linear(2 * d, d, bias=False),
            refine_w2=linear(d + config.direction_dim, d, bias=False),
            empty_view_score=Parameter(np.zeros((1, 1)), dtype=dtype),
        )

    @property
    def dtype(self) -> type:
        return self.config.np_dtype

    @property
    def d_model(self) -> int:
        return self.config.d_model

    def named_parameters(self) -> dict[str, Parameter]:
        params: dict[str, Parameter] = {
            "embeddings.word": self.word_embeddings,
            "embeddings.position": self.position_embeddings,
        }
        params.update(self.embedding_norm.named_parameters("embeddings.norm"))
        for i, layer in enumerate(self.layers):
            params.update(layer.named_parameters(f"encoder.layers.{i}"))
        params.update(self.scene_projection.named_parameters("projection.scene"))
        params.update(self.object_projection.named_parameters("projection.object"))
        params.update(self.direction_projection.named_parameters("projection.direction"))
        params.update(self.refine_w1.named_parameters("refine.w1"))
        params.update(self.refine_w2.named_parameters("refine.w2"))
        params["scoring.empty_view"] = self.empty_view_score
        return params

    def num_parameters(self) -> int:
        return sum(p.data.size for p in self.named_parameters().values())

    def bump_version(self) -> None:
        """Record an in-place parameter update."""
        self.version += 1

    def zero_grad(self) -> None:
        for param in self.named_parameters().values():
            param.zero_grad()

    def state_dict(self) -> dict[str, np.ndarray]:
        return {name: p.data.copy() for name, p in self.named_parameters().items()}

    def load_state_dict(self, tensors: Mapping[str, np.ndarray]) -> None:
        """
        Copy named tensors into the parameters.

        Raises:
            CheckpointError: on missing, unexpected or mis-shaped tensors
        """
        params = self.named_parameters()
        missing = sorted(set(params) - set(tensors))
        unexpected = sorted(set(tensors) - set(params))
        if missing or unexpected:
            raise CheckpointError(f"Parameter names differ: missing={missing}, unexpected={unexpected}")
        for name, param in params.items():
            value = np.asarray(tensors[name])
            if value.shape != param.shape:
                raise CheckpointError(f"Shape mismatch for {name}: checkpoint {value.shape}, model {param.shape}")
            param.data = value.astype(self.dtype, copy=True)
            param.grad = np.zeros_like(param.data)
        self.bump_version()
