"""
Feature synthesizer: per-class base embeddings plus Gaussian noise.

Stands in for the scene and object visual encoders. Base embeddings are
unit-norm; renders add N(0, sigma^2) noise per component.
"""
from dataclasses import dataclass
import hashlib

import numpy as np

from core.domain.exceptions import DegenerateBatchError

from .vocab import VocabSpec


@dataclass(frozen=True, eq=False)
class AlignmentBatch:
    """Word ids paired row-by-row with feature vectors of their class."""

    tokens: np.ndarray
    features: np.ndarray
    kind: str


@dataclass(frozen=True, eq=False)
class FeatureSynth:
    scene_table: np.ndarray
    object_table: np.ndarray
    sigma: float
    seed: int

    def __post_init__(self) -> None:
        if self.sigma < 0:
            raise ValueError(f"Noise scale must be non-negative, got {self.sigma}")
        for name in ("scene_table", "object_table"):
            table = np.array(getattr(self, name), dtype=np.float64)
            if table.ndim != 2 or table.shape[0] == 0:
                raise ValueError(f"{name} must be a non-empty 2-D table, got shape {table.shape}")
            norms = np.linalg.norm(table, axis=1)
            if not np.allclose(norms, 1.0, atol=1e-9):
                raise ValueError(f"{name} rows must be unit-norm")
            table.setflags(write=False)
            object.__setattr__(self, name, table)

    @classmethod
    def create(
        cls,
        seed: int,
        num_scene_classes: int,
        num_object_classes: int,
        scene_dim: int = 32,
        object_dim: int = 32,
        sigma: float = 0.1,
    ) -> "FeatureSynth":
        rng = np.random.default_rng(seed)

        def unit_rows(n: int, d: int) -> np.ndarray:
            table = rng.normal(size=(n, d))
            return table / np.linalg.norm(table, axis=1, keepdims=True)

        return cls(
            scene_table=unit_rows(num_scene_classes, scene_dim),
            object_table=unit_rows(num_object_classes, object_dim),
            sigma=sigma,
            seed=seed,
        )

    @property
    def scene_dim(self) -> int:
        return self.scene_table.shape[1]

    @property
    def object_dim(self) -> int:
        return self.object_table.shape[1]

    @property
    def num_scene_classes(self) -> int:
        return self.scene_table.shape[0]

    @property
    def num_object_classes(self) -> int:
        return self.object_table.shape[0]

    def scene_feature(self, scene_class: int, rng: np.random.Generator) -> np.ndarray:
        base = self.scene_table[scene_class]
        if self.sigma == 0.0:
            return base.copy()
        return base + rng.normal(0.0, self.sigma, size=base.shape)

    def object_feature(self, object_class: int, rng: np.random.Generator) -> np.ndarray:
        base = self.object_table[object_class]
        if self.sigma == 0.0:
            return base.copy()
        return base + rng.normal(0.0, self.sigma, size=base.shape)

    def fingerprint(self) -> str:
        digest = hashlib.sha256()
        digest.update(np.ascontiguousarray(self.scene_table).tobytes())
        digest.update(np.ascontiguousarray(self.object_table).tobytes())
        digest.update(repr(float(self.sigma)).encode())
        return digest.hexdigest()

    def alignment_batch(
        self, vocab: VocabSpec, kind: str, batch_size: int, rng: np.random.Generator
    ) -> AlignmentBatch:
        """
        Standalone (word, feature) pairs for the alignment pretraining stage.

        Classes are drawn without replacement so every row's partner is its
        only positive; the batch is capped at the number of classes.

        Raises:
            DegenerateBatchError: if fewer than two pairs can be drawn
            ValueError: for an unknown kind
        """
        if kind == "scene":
            num_classes, word, render = self.num_scene_classes, vocab.scene_word, self.scene_feature
        elif kind == "object":
            num_classes, word, render = self.num_object_classes, vocab.object_word, self.object_feature
        else:
            raise ValueError(f"Unknown alignment kind {kind!r}")
        size = min(batch_size, num_classes)
        if size < 2:
            raise DegenerateBatchError(f"Alignment batch of {size} {kind} pair(s) has no distractors")
        classes = rng.choice(num_classes, size=size, replace=False)
        return AlignmentBatch(
            tokens=np.array([word(int(c)) for c in classes], dtype=np.int64),
            features=np.stack([render(int(c), rng) for c in classes]),
            kind=kind,
        )
