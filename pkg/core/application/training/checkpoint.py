"""Training checkpoint: everything needed for a bitwise resume."""

from dataclasses import dataclass, field
from typing import Any

import numpy as np


@dataclass
class TrainingCheckpoint:
    model_config: dict[str, Any]
    parameters: dict[str, np.ndarray]
    iteration: int = 0
    optimizer: dict[str, np.ndarray] = field(default_factory=dict)
    baseline: float = 0.0
    variant: str = ""
    run_config: dict[str, str] = field(default_factory=dict)
