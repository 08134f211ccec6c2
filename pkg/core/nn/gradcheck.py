"""Central finite-difference check of tape gradients."""

from collections.abc import Callable, Mapping
from dataclasses import dataclass

import numpy as np

from core.domain.exceptions import NumericError
from core.infrastructure.logging import get_logger

from .tensor import GradTape, Tensor2

logger = get_logger(__name__)


@dataclass(frozen=True)
class GradCheckResult:
    max_relative_error: float
    worst_parameter: str | None
    worst_index: tuple[int, int] | None
    entries_checked: int


def _evaluate(loss_fn: Callable[[], Tensor2]) -> float:
    value = loss_fn()
    if not value.is_finite():
        raise NumericError(f"Non-finite loss during gradient check: {value.data.ravel()[:4]}")
    return value.item()


def grad_check_report(
    loss_fn: Callable[[], Tensor2],
    params: Mapping[str, Tensor2],
    epsilon: float = 1e-5,
    max_entries_per_param: int | None = None,
    rng: np.random.Generator | None = None,
    abs_tol: float = 0.0,
) -> GradCheckResult:
    """
    Compare tape gradients of loss_fn against central differences.

    loss_fn must rebuild the scalar loss from the current parameter values
    on every call. Relative error per entry is
    |analytic - fd| / max(|analytic|, |fd|, 1e-8); entries whose absolute
    discrepancy is at most abs_tol count as exact.

    Raises:
        ValueError: if epsilon is outside (0, 1e-3]
        NumericError: if the loss is non-finite
    """
    if not 0.0 < epsilon <= 1e-3:
        raise ValueError(f"epsilon must lie in (0, 1e-3], got {epsilon}")

    with GradTape() as tape:
        loss = loss_fn()
    if not loss.is_finite():
        raise NumericError("Non-finite loss during gradient check")
    tape.backward(loss)
    analytic = tape.parameter_grads(params)

    rng = rng or np.random.default_rng(0)
    worst = (0.0, None, None)
    checked = 0
    for name, param in params.items():
        flat_size = param.data.size
        if max_entries_per_param is not None and flat_size > max_entries_per_param:
            flat = rng.choice(flat_size, size=max_entries_per_param, replace=False)
        else:
            flat = np.arange(flat_size)
        for f in flat:
            idx = np.unravel_index(int(f), param.data.shape)
            original = param.data[idx]
            param.data[idx] = original + epsilon
            plus = _evaluate(loss_fn)
            param.data[idx] = original - epsilon
            minus = _evaluate(loss_fn)
            param.data[idx] = original
            fd = (plus - minus) / (2.0 * epsilon)
            a = float(analytic[name][idx])
            diff = abs(a - fd)
            checked += 1
            if diff <= abs_tol:
                continue
            rel = diff / max(abs(a), abs(fd), 1e-8)
            if rel > worst[0]:
                worst = (rel, name, (int(idx[0]), int(idx[1])))

    logger.info(
        "grad_check_done: entries=%d, max_relative_error=%.3e, worst_parameter=%s, worst_index=%s",
        checked,
        worst[0],
        worst[1],
        worst[2],
    )
    return GradCheckResult(
        max_relative_error=worst[0],
        worst_parameter=worst[1],
        worst_index=worst[2],
        entries_checked=checked,
    )


def grad_check(
    loss_fn: Callable[[], Tensor2],
    params: Mapping[str, Tensor2],
    epsilon: float = 1e-5,
    **kwargs: object,
) -> float:
    """Maximum relative error between analytic and central-difference gradients."""
    return grad_check_report(loss_fn, params, epsilon, **kwargs).max_relative_error  # type: ignore[arg-type]
