"""Token ids of the synthetic instruction language."""

from collections.abc import Iterable
from dataclasses import dataclass


@dataclass(frozen=True)
class VocabSpec:
    """
    Disjoint id ranges: specials, connectives, scene words, object words.

        0 PAD, 1 CLS, 2 SEP, 3 THEN, 4 STOP_AT,
        5 .. 5+S-1          scene words (one per scene class)
        5+S .. 5+S+O-1      object words (one per object class)
    """

    num_scene_classes: int
    num_object_classes: int

    PAD = 0
    CLS = 1
    SEP = 2
    THEN = 3
    STOP_AT = 4
    NUM_RESERVED = 5

    def __post_init__(self) -> None:
        if self.num_scene_classes < 1 or self.num_object_classes < 1:
            raise ValueError(
                f"Vocabulary needs at least one scene and one object class, got "
                f"{self.num_scene_classes} and {self.num_object_classes}"
            )

    @property
    def scene_range(self) -> range:
        return range(self.NUM_RESERVED, self.NUM_RESERVED + self.num_scene_classes)

    @property
    def object_range(self) -> range:
        start = self.scene_range.stop
        return range(start, start + self.num_object_classes)

    @property
    def size(self) -> int:
        return self.object_range.stop

    def scene_word(self, scene_class: int) -> int:
        if not 0 <= scene_class < self.num_scene_classes:
            raise ValueError(f"Unknown scene class {scene_class}")
        return self.scene_range.start + scene_class

    def object_word(self, object_class: int) -> int:
        if not 0 <= object_class < self.num_object_classes:
            raise ValueError(f"Unknown object class {object_class}")
        return self.object_range.start + object_class

    def is_scene_word(self, token: int) -> bool:
        return token in self.scene_range

    def is_object_word(self, token: int) -> bool:
        return token in self.object_range

    def count_object_words(self, tokens: Iterable[int]) -> int:
        return sum(1 for t in tokens if self.is_object_word(t))

    def decode(self, tokens: Iterable[int]) -> str:
        """Readable rendering, e.g. 'scene3 obj7 THEN scene1 STOP_AT scene1'."""
        names = {self.PAD: "PAD", self.CLS: "CLS", self.SEP: "SEP", self.THEN: "THEN", self.STOP_AT: "STOP_AT"}
        words = []
        for t in tokens:
            if t in names:
                words.append(names[t])
            elif self.is_scene_word(t):
                words.append(f"scene{t - self.scene_range.start}")
            elif self.is_object_word(t):
                words.append(f"obj{t - self.object_range.start}")
            else:
                words.append(f"<{t}>")
        return " ".join(words)
