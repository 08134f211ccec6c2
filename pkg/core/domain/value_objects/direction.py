"""Directional features for candidate views and actions."""

from dataclasses import dataclass
import math

import numpy as np


@dataclass(frozen=True)
class Direction:
    """Heading and elevation in radians."""

    heading: float = 0.0
    elevation: float = 0.0

    def basis(self) -> np.ndarray:
        """(sin heading, cos heading, sin elevation, cos elevation)."""
        return np.array(
            [
                math.sin(self.heading),
                math.cos(self.heading),
                math.sin(self.elevation),
                math.cos(self.elevation),
            ]
        )

    def feature(self, dim: int) -> np.ndarray:
        """
        Directional feature a_t: the 4-value basis tiled to dim.

        Raises:
            ValueError: if dim is not a positive multiple of 4
        """
        if dim <= 0 or dim % 4:
            raise ValueError(f"Directional feature dimension must be a positive multiple of 4, got {dim}")
        return np.tile(self.basis(), dim // 4)
