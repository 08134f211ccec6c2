"""
Mask pattern enum.

Values are the CLI-facing pattern names.
"""
from enum import Enum

from ..exceptions import ConfigError


class MaskPattern(str, Enum):
    """Which tokens act as queries inside the multimodal transformer."""

    BASELINE = "baseline"
    ALL_ATTENTION = "all"
    SELECTIVE_OBJECT = "selective-object"
    SELECTIVE_SCENE = "selective-scene"
    OBJECT_ONLY = "object-only"

    @property
    def is_selective(self) -> bool:
        """True for patterns that freeze a visual token group."""
        return self in (MaskPattern.SELECTIVE_OBJECT, MaskPattern.SELECTIVE_SCENE)

    @classmethod
    def parse(cls, name: str) -> "MaskPattern":
        """Parse a CLI pattern name."""
        try:
            return cls(name)
        except ValueError as exc:
            choices = ", ".join(p.value for p in cls)
            raise ConfigError(f"Unknown mask pattern '{name}', expected one of: {choices}") from exc
