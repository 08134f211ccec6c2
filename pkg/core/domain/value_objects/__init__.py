"""Domain value objects - immutable types."""

from .attention_mask import AttentionMask
from .candidate_view import CandidateView
from .direction import Direction
from .policy_variant import PolicyVariant
from .run_id import RunID
from .token_layout import TokenLayout

__all__ = [
    "AttentionMask",
    "CandidateView",
    "Direction",
    "PolicyVariant",
    "RunID",
    "TokenLayout",
]
