"""Dataset split names."""
from enum import Enum


class SplitName(str, Enum):
    """
    Dataset splits.

    val_seen draws new episodes on training worlds; val_unseen uses worlds
    whose graphs never appear in training.
    """

    TRAIN = "train"
    VAL_SEEN = "val_seen"
    VAL_UNSEEN = "val_unseen"
