"""
AdamW with bias-corrected moments and decoupled weight decay.

Update order per parameter (PyTorch convention):

    theta <- theta * (1 - lr * weight_decay)
    m <- beta1 * m + (1 - beta1) * g
    v <- beta2 * v + (1 - beta2) * g^2
    theta <- theta - lr * m_hat / (sqrt(v_hat) + eps)
"""
from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np

from core.domain.exceptions import CheckpointError, NumericError
from core.nn import Parameter


@dataclass
class OptimizerState:
    step: int = 0
    first_moment: dict[str, np.ndarray] = field(default_factory=dict)
    second_moment: dict[str, np.ndarray] = field(default_factory=dict)


class AdamW:
    def __init__(
        self,
        params: Mapping[str, Parameter],
        lr: float = 3e-4,
        betas: tuple[float, float] = (0.9, 0.999),
        eps: float = 1e-8,
        weight_decay: float = 0.01,
    ):
        if lr < 0:
            raise ValueError(f"Invalid learning rate: {lr}")
        if not 0.0 <= betas[0] < 1.0 or not 0.0 <= betas[1] < 1.0:
            raise ValueError(f"Invalid betas: {betas}")
        if eps <= 0 or weight_decay < 0:
            raise ValueError(f"Invalid eps={eps} or weight_decay={weight_decay}")
        self.params = dict(params)
        self.lr = lr
        self.beta1, self.beta2 = betas
        self.eps = eps
        self.weight_decay = weight_decay
        self.state = OptimizerState(
            first_moment={name: np.zeros_like(p.data) for name, p in self.params.items()},
            second_moment={name: np.zeros_like(p.data) for name, p in self.params.items()},
        )

    def step(self, grads: Mapping[str, np.ndarray] | None = None) -> None:
        """
        Apply one update from grads (defaults to each parameter's .grad buffer).

        Raises:
            NumericError: if a gradient is non-finite
        """
        self.state.step += 1
        t = self.state.step
        correction1 = 1.0 - self.beta1**t
        correction2 = 1.0 - self.beta2**t
        for name, param in self.params.items():
            grad = param.grad if grads is None else grads.get(name)
            if grad is None:
                continue
            if not np.all(np.isfinite(grad)):
                raise NumericError(f"Non-finite gradient for {name} at optimizer step {t}")
            m = self.state.first_moment[name]
            v = self.state.second_moment[name]
            param.data *= 1.0 - self.lr * self.weight_decay
            m *= self.beta1
            m += (1.0 - self.beta1) * grad
            v *= self.beta2
            v += (1.0 - self.beta2) * (grad * grad)
            m_hat = m / correction1
            v_hat = v / correction2
            param.data -= self.lr * m_hat / (np.sqrt(v_hat) + self.eps)

    def state_dict(self) -> dict[str, np.ndarray]:
        out = {"step": np.array(self.state.step, dtype=np.int64)}
        for name in self.params:
            out[f"m.{name}"] = self.state.first_moment[name].copy()
            out[f"v.{name}"] = self.state.second_moment[name].copy()
        return out

    def load_state_dict(self, data: Mapping[str, np.ndarray]) -> None:
        """
        Raises:
            CheckpointError: if moments are missing or mis-shaped
        """
        if "step" not in data:
            raise CheckpointError("Optimizer state has no step counter")
        for name, param in self.params.items():
            for prefix, target in (("m", self.state.first_moment), ("v", self.state.second_moment)):
                key = f"{prefix}.{name}"
                if key not in data:
                    raise CheckpointError(f"Optimizer state is missing {key}")
                value = np.asarray(data[key])
                if value.shape != param.shape:
                    raise CheckpointError(f"Optimizer moment {key} has shape {value.shape}, expected {param.shape}")
                target[name] = value.astype(param.dtype, copy=True)
        self.state.step = int(data["step"])


def clip_global_norm(grads: dict[str, np.ndarray], max_norm: float) -> float:
    """Scale grads in place so their joint L2 norm is at most max_norm; returns the pre-clip norm."""
    total = float(np.sqrt(sum(float(np.sum(g * g)) for g in grads.values())))
    if not np.isfinite(total):
        raise NumericError("Non-finite gradient norm")
    if total > max_norm > 0:
        factor = max_norm / total
        for name in grads:
            grads[name] = grads[name] * factor
    return total
