"""
Tensor2 and the gradient tape.

Tensor2 wraps a 2-D numpy buffer. Operations in core.nn.functional record
themselves on the active GradTape (if any) when at least one input tracks
gradients. Gradients are stored on the tape, not on the tensors, so several
tapes can run concurrently over shared read-only parameters.
"""
from collections.abc import Callable, Mapping, Sequence
from contextvars import ContextVar
from dataclasses import dataclass
from typing import Optional

import numpy as np

from core.domain.exceptions import NumericError

DEFAULT_DTYPE = np.float64

BackwardFn = Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]


class Tensor2:
    """A rows x cols matrix that may participate in reverse-mode differentiation."""

    __slots__ = ("data", "requires_grad", "name", "__weakref__")

    def __init__(
        self,
        data: object,
        requires_grad: bool = False,
        name: str | None = None,
        dtype: np.dtype | type | None = None,
    ) -> None:
        if isinstance(data, np.ndarray) and dtype is None and data.dtype in (np.float32, np.float64):
            arr = data
        else:
            arr = np.asarray(data, dtype=dtype or DEFAULT_DTYPE)
        if arr.ndim == 0:
            arr = arr.reshape(1, 1)
        elif arr.ndim == 1:
            arr = arr.reshape(1, -1)
        elif arr.ndim != 2:
            raise ValueError(f"Tensor2 needs at most 2 dimensions, got shape {arr.shape}")
        self.data = arr
        self.requires_grad = requires_grad
        self.name = name

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape  # type: ignore[return-value]

    @property
    def dtype(self) -> np.dtype:
        return self.data.dtype

    def item(self) -> float:
        if self.data.size != 1:
            raise ValueError(f"item() needs a 1x1 tensor, got shape {self.shape}")
        return float(self.data[0, 0])

    def numpy(self) -> np.ndarray:
        return self.data

    def detach(self) -> "Tensor2":
        return Tensor2(self.data)

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.data)))

    def __repr__(self) -> str:
        label = f" name={self.name}" if self.name else ""
        return f"Tensor2(shape={self.shape}{label}, requires_grad={self.requires_grad})"

    # Operator sugar; implementations live in core.nn.functional.
    def __matmul__(self, other: "Tensor2") -> "Tensor2":
        from . import functional as F

        return F.matmul(self, other)

    def __add__(self, other: "Tensor2") -> "Tensor2":
        from . import functional as F

        return F.add(self, other)

    def __sub__(self, other: "Tensor2") -> "Tensor2":
        from . import functional as F

        return F.sub(self, other)

    def __mul__(self, other: "Tensor2") -> "Tensor2":
        from . import functional as F

        return F.mul(self, other)

    @property
    def T(self) -> "Tensor2":
        from . import functional as F

        return F.transpose(self)


class Parameter(Tensor2):
    """A learnable tensor with a persistent gradient buffer of identical shape."""

    __slots__ = ("grad",)

    def __init__(self, data: object, name: str | None = None, dtype: np.dtype | type | None = None) -> None:
        super().__init__(np.array(data, dtype=dtype or DEFAULT_DTYPE), requires_grad=True, name=name)
        self.grad = np.zeros_like(self.data)

    def zero_grad(self) -> None:
        self.grad.fill(0.0)

    def astype(self, dtype: np.dtype | type) -> None:
        self.data = self.data.astype(dtype)
        self.grad = np.zeros_like(self.data)


@dataclass
class _Record:
    output: Tensor2
    inputs: tuple[Tensor2, ...]
    backward: BackwardFn


_ACTIVE_TAPE: ContextVar[Optional["GradTape"]] = ContextVar("soat_active_tape", default=None)


def active_tape() -> Optional["GradTape"]:
    return _ACTIVE_TAPE.get()


class GradTape:
    """
    Records operations in execution order and replays them backwards.

    Usage:
        with GradTape() as tape:
            loss = f()
        tape.backward(loss)
        tape.grad(param)
    """

    def __init__(self) -> None:
        self._records: list[_Record] = []
        self._grads: dict[int, np.ndarray] = {}
        self._token = None

    def __enter__(self) -> "GradTape":
        self._token = _ACTIVE_TAPE.set(self)
        return self

    def __exit__(self, *exc: object) -> None:
        if self._token is not None:
            _ACTIVE_TAPE.reset(self._token)
            self._token = None

    def __len__(self) -> int:
        return len(self._records)

    def record(self, output: Tensor2, inputs: Sequence[Tensor2], backward: BackwardFn) -> None:
        self._records.append(_Record(output=output, inputs=tuple(inputs), backward=backward))

    def backward(self, loss: Tensor2, seed: float | np.ndarray = 1.0) -> None:
        """
        Accumulate d(seed * loss)/d(x) for every tensor touched on this tape.

        Gradients from repeated backward calls add up.

        Raises:
            NumericError: if the loss or any gradient is non-finite
        """
        if not loss.is_finite():
            raise NumericError(f"Non-finite loss {loss.data.ravel()[:4]}")
        grads = self._grads
        seed_arr = np.broadcast_to(np.asarray(seed, dtype=loss.dtype), loss.shape).copy()
        self._accumulate(grads, loss, seed_arr)

        for rec in reversed(self._records):
            g = grads.get(id(rec.output))
            if g is None:
                continue
            input_grads = rec.backward(g)
            for tensor, tensor_grad in zip(rec.inputs, input_grads):
                if tensor_grad is None or not tensor.requires_grad:
                    continue
                self._accumulate(grads, tensor, tensor_grad)

        for rec in self._records:
            for tensor in rec.inputs:
                if isinstance(tensor, Parameter):
                    g = grads.get(id(tensor))
                    if g is not None and not np.all(np.isfinite(g)):
                        raise NumericError(f"Non-finite gradient for parameter {tensor.name}")

    @staticmethod
    def _accumulate(grads: dict[int, np.ndarray], tensor: Tensor2, grad: np.ndarray) -> None:
        key = id(tensor)
        if key in grads:
            grads[key] = grads[key] + grad
        else:
            grads[key] = np.array(grad, dtype=tensor.dtype, copy=True)

    def grad(self, tensor: Tensor2) -> np.ndarray | None:
        return self._grads.get(id(tensor))

    def parameter_grads(self, params: Mapping[str, Tensor2]) -> dict[str, np.ndarray]:
        """Gradients for named parameters (zeros for parameters not touched)."""
        out = {}
        for name, param in params.items():
            g = self._grads.get(id(param))
            out[name] = np.zeros_like(param.data) if g is None else g
        return out
