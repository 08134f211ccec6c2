"""Alignment pretraining at default scale."""

import numpy as np
import pytest

from core.agent import ModelConfig, SoatModel
from core.application.training import pretrain_alignment
from core.env import FeatureSynth, VocabSpec
from core.settings import AppSettings


@pytest.mark.slow
def test_default_pretraining_matches_held_out_pairs():
    settings = AppSettings.from_sources()
    env, train = settings.env, settings.train
    vocab = VocabSpec(env.num_scene_classes, env.num_object_classes)
    synth = FeatureSynth.create(
        1, env.num_scene_classes, env.num_object_classes, env.scene_feature_dim, env.object_feature_dim, env.noise_sigma
    )
    model = SoatModel.create(ModelConfig.from_settings(settings.model, env, vocab.size), seed=0)

    report = pretrain_alignment(
        model,
        vocab,
        synth,
        steps=train.pretrain_steps,
        batch_size=train.pretrain_batch_size,
        learning_rate=train.pretrain_learning_rate,
        rng=np.random.default_rng(0),
    )
    assert report.scene_accuracy > 0.95
    assert report.object_accuracy > 0.95
