"""Shared fixtures: tiny vocabulary, model, worlds and dataset."""

import logging

import numpy as np
import pytest

from core.agent import ModelConfig, SoatModel
from core.application.services.verification_service import tiny_model_config
from core.domain.entities import NavGraph
from core.domain.enums import MaskPattern
from core.domain.value_objects import PolicyVariant
from core.env import FeatureSynth, NavDataset, VocabSpec, generate_dataset, generate_world
from core.infrastructure.logging import get_logger
from core.settings import AppSettings, EnvSettings

NUM_SCENE_CLASSES = 4
NUM_OBJECT_CLASSES = 8
FEATURE_DIM = 8

TINY_ENV = dict(
    num_train_worlds=2,
    num_unseen_worlds=1,
    min_nodes=10,
    max_nodes=14,
    num_scene_classes=NUM_SCENE_CLASSES,
    num_object_classes=NUM_OBJECT_CLASSES,
    max_objects_per_node=3,
    scene_feature_dim=FEATURE_DIM,
    object_feature_dim=FEATURE_DIM,
    train_episodes_per_world=4,
    val_seen_episodes_per_world=2,
    val_unseen_episodes_per_world=3,
    min_path_hops=2,
    max_path_hops=3,
)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def vocab() -> VocabSpec:
    return VocabSpec(NUM_SCENE_CLASSES, NUM_OBJECT_CLASSES)


@pytest.fixture(scope="session")
def synth() -> FeatureSynth:
    return FeatureSynth.create(7, NUM_SCENE_CLASSES, NUM_OBJECT_CLASSES, FEATURE_DIM, FEATURE_DIM, 0.1)


@pytest.fixture(scope="session")
def model_config(vocab: VocabSpec) -> ModelConfig:
    return tiny_model_config(vocab)


@pytest.fixture
def model(model_config: ModelConfig) -> SoatModel:
    return SoatModel.create(model_config, seed=0)


@pytest.fixture(scope="session")
def world() -> NavGraph:
    return generate_world(42, 14, NUM_SCENE_CLASSES, NUM_OBJECT_CLASSES, (0, 3), world_id="fixture-world")


@pytest.fixture(scope="session")
def tiny_env() -> EnvSettings:
    return EnvSettings(**TINY_ENV)


@pytest.fixture(scope="session")
def dataset(tiny_env: EnvSettings) -> NavDataset:
    return generate_dataset(tiny_env, seed=3, max_instruction_len=32)


@pytest.fixture
def full_variant() -> PolicyVariant:
    return PolicyVariant.for_pattern(MaskPattern.SELECTIVE_OBJECT)


TINY_MODEL = dict(
    d_model=16,
    num_heads=2,
    num_layers=2,
    d_ff=32,
    direction_dim=8,
    max_instruction_len=32,
    init_std=0.3,
)

TINY_TRAIN = dict(
    iterations=3,
    batch_size=2,
    learning_rate=1e-3,
    pretrain_steps=2,
    pretrain_batch_size=4,
    eval_every=1,
    eval_episodes=2,
    checkpoint_every=1,
    max_episode_steps=6,
)


@pytest.fixture
def tiny_settings() -> AppSettings:
    return AppSettings.from_sources(overrides={**TINY_ENV, **TINY_MODEL, **TINY_TRAIN, "seed": 3})


class _RecordCollector(logging.Handler):
    def __init__(self) -> None:
        super().__init__(logging.DEBUG)
        self.records: list[logging.LogRecord] = []

    def emit(self, record: logging.LogRecord) -> None:
        self.records.append(record)


@pytest.fixture
def log_records():
    """Records reaching the 'soat' logger; it does not propagate, so caplog sees nothing."""
    root = get_logger("soat")
    collector = _RecordCollector()
    root.addHandler(collector)
    yield collector.records
    root.removeHandler(collector)
