"""Boolean query/key permission matrix plus the rows refreshed per layer."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class AttentionMask:
    """
    mask[i, j] is True when query token i may attend to key token j.

    Only rows listed in update_set act as queries; every other row is
    all-False and the corresponding token passes through a layer untouched.
    """

    matrix: np.ndarray
    update_set: tuple[int, ...]

    def __post_init__(self) -> None:
        matrix = np.array(self.matrix, dtype=bool)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError(f"Mask must be square, got shape {matrix.shape}")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "update_set", tuple(sorted(int(i) for i in self.update_set)))

    @property
    def num_tokens(self) -> int:
        return self.matrix.shape[0]

    @property
    def update_rows(self) -> np.ndarray:
        return np.asarray(self.update_set, dtype=np.int64)

    def query_rows(self) -> np.ndarray:
        """The mask restricted to update rows (|update_set| x T)."""
        return self.matrix[self.update_rows]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AttentionMask):
            return NotImplemented
        return self.update_set == other.update_set and np.array_equal(self.matrix, other.matrix)

    def __hash__(self) -> int:
        return hash((self.update_set, self.matrix.tobytes()))
