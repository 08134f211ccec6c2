"""Agent state and action distribution."""

from dataclasses import dataclass

import numpy as np

from core.domain.exceptions import NumericError
from core.nn import FrozenKV, Tensor2

PROBABILITY_TOLERANCE = 1e-9


def probability_tolerance(dtype: np.dtype) -> float:
    """Allowed deviation of a probability sum from 1 at the given precision."""
    return max(PROBABILITY_TOLERANCE, 64 * float(np.finfo(dtype).eps))


@dataclass(frozen=True, eq=False)
class AgentState:
    """
    Recurrent state of one episode.

    s is the state token (1 x d); encoded_instruction holds psi(I) (L x d),
    fixed for the episode; instruction_kv caches each layer's key/value
    projections of psi(I). The cache is valid only while the model version
    equals model_version.
    """

    s: Tensor2
    encoded_instruction: Tensor2
    instruction_kv: tuple[FrozenKV, ...]
    t: int = 0
    model_version: int = 0

    def __post_init__(self) -> None:
        if self.s.rows != 1:
            raise ValueError(f"State token must be a single row, got shape {self.s.shape}")
        if not self.s.is_finite():
            raise NumericError(f"Non-finite state token at t={self.t}")

    @property
    def s_t(self) -> np.ndarray:
        return self.s.data[0]

    @property
    def num_instruction_tokens(self) -> int:
        return self.encoded_instruction.rows

    def advance(self, s_next: Tensor2) -> "AgentState":
        return AgentState(
            s=s_next,
            encoded_instruction=self.encoded_instruction,
            instruction_kv=self.instruction_kv,
            t=self.t + 1,
            model_version=self.model_version,
        )


@dataclass(frozen=True)
class Provenance:
    """Which token supplied a view's selected score: 'scene', 'object' or 'empty'."""

    kind: str
    index: int

    @classmethod
    def scene(cls, view: int) -> "Provenance":
        return cls("scene", view)

    @classmethod
    def obj(cls, position: int) -> "Provenance":
        return cls("object", position)

    @classmethod
    def empty(cls) -> "Provenance":
        return cls("empty", -1)


@dataclass(frozen=True, eq=False)
class ActionDistribution:
    """
    Probabilities over the N navigable views followed by stop.

    logits and log_probs stay connected to the tape for loss computation.
    """

    logits: Tensor2
    log_probs: Tensor2
    provenance: tuple[Provenance, ...]
    chosen: int

    def __post_init__(self) -> None:
        n = self.logits.cols
        if len(self.provenance) != n:
            raise ValueError(f"{len(self.provenance)} provenance entries for {n} actions")
        if not 0 <= self.chosen < n:
            raise ValueError(f"Chosen action {self.chosen} outside 0..{n - 1}")
        total = float(self.probabilities.sum())
        if abs(total - 1.0) > probability_tolerance(self.log_probs.data.dtype):
            raise NumericError(f"Action probabilities sum to {total!r}")

    @property
    def probabilities(self) -> np.ndarray:
        return np.exp(self.log_probs.data[0])

    @property
    def num_actions(self) -> int:
        return self.logits.cols

    @property
    def stop_index(self) -> int:
        return self.logits.cols - 1

    def entropy(self) -> float:
        p = self.probabilities
        return float(-(p * self.log_probs.data[0]).sum())
