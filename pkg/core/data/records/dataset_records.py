"""Persistence records for dataset files (one world per JSONL line) and the manifest."""

from typing import Any, Dict, List, Tuple

from pydantic import BaseModel, ConfigDict, Field

DATASET_FORMAT_VERSION = 1


class ObjectRecord(BaseModel):
    object_class: int = Field(..., ge=0)
    size: float = Field(..., gt=0)

    model_config = ConfigDict(frozen=True, extra="forbid")


class NodeRecord(BaseModel):
    id: int = Field(..., ge=0)
    x: float
    y: float
    z: float
    scene_class: int = Field(..., ge=0)
    objects: List[ObjectRecord] = Field(default_factory=list)

    model_config = ConfigDict(frozen=True, extra="forbid")


class GraphRecord(BaseModel):
    nodes: List[NodeRecord]
    edges: List[Tuple[int, int]]

    model_config = ConfigDict(frozen=True, extra="forbid")


class EpisodeRecord(BaseModel):
    episode_id: str
    start: int = Field(..., ge=0)
    goal: int = Field(..., ge=0)
    path: List[int]
    instruction: List[int]
    object_ref_count: int = Field(..., ge=0)
    noise_seed: int = Field(default=0, ge=0)

    model_config = ConfigDict(frozen=True, extra="forbid")


class WorldLineRecord(BaseModel):
    """One line of a split file: a world and that split's episodes on it."""

    format_version: int
    world_id: str
    graph: GraphRecord
    episodes: List[EpisodeRecord] = Field(default_factory=list)

    model_config = ConfigDict(frozen=True, extra="forbid")


class SplitManifest(BaseModel):
    file: str
    world_ids: List[str]
    num_episodes: int = Field(..., ge=0)
    graph_hashes: List[str]

    model_config = ConfigDict(frozen=True, extra="forbid")


class VocabRecord(BaseModel):
    num_scene_classes: int = Field(..., ge=1)
    num_object_classes: int = Field(..., ge=1)

    model_config = ConfigDict(frozen=True, extra="forbid")


class FeatureSynthRecord(BaseModel):
    seed: int
    sigma: float = Field(..., ge=0)
    scene_dim: int = Field(..., ge=1)
    object_dim: int = Field(..., ge=1)
    fingerprint: str

    model_config = ConfigDict(frozen=True, extra="forbid")


class ManifestRecord(BaseModel):
    format_version: int
    seed: int
    vocab: VocabRecord
    feature_synth: FeatureSynthRecord
    splits: Dict[str, SplitManifest]
    env: Dict[str, Any] = Field(default_factory=dict)
    world_split: Dict[str, str] = Field(default_factory=dict)

    model_config = ConfigDict(frozen=True, extra="forbid")
