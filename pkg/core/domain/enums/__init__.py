"""Domain enums."""

from .mask_pattern import MaskPattern
from .run_status import RunStatus
from .split_name import SplitName

__all__ = ["MaskPattern", "RunStatus", "SplitName"]
