"""Minimal dense neural-network kernels with tape-based reverse-mode gradients."""

from . import functional
from .gradcheck import GradCheckResult, grad_check, grad_check_report
from .layers import (
    EncoderLayer,
    FrozenKV,
    LayerNormParams,
    LinearLayer,
    encoder_layer_forward,
    linear_forward,
    multi_head_attention,
    project_kv,
)
from .tensor import DEFAULT_DTYPE, GradTape, Parameter, Tensor2, active_tape

masked_attention_forward = functional.masked_attention

__all__ = [
    "DEFAULT_DTYPE",
    "EncoderLayer",
    "FrozenKV",
    "GradCheckResult",
    "GradTape",
    "LayerNormParams",
    "LinearLayer",
    "Parameter",
    "Tensor2",
    "active_tape",
    "encoder_layer_forward",
    "functional",
    "grad_check",
    "grad_check_report",
    "linear_forward",
    "masked_attention_forward",
    "multi_head_attention",
    "project_kv",
]
