"""
Alignment pretraining proxy.

Symmetric InfoNCE between word embeddings and projected features: each
word must pick its own feature among the batch (and each feature its own
word). Only embeddings.word and the scene/object projections are trained.
"""
from dataclasses import dataclass
import math

import numpy as np

from core.agent import SoatModel
from core.domain.exceptions import DegenerateBatchError
from core.env import AlignmentBatch, FeatureSynth, VocabSpec
from core.infrastructure.logging import get_logger
from core.nn import GradTape, LinearLayer, Parameter, Tensor2, linear_forward
from core.nn import functional as F

from .optimizer import AdamW

logger = get_logger(__name__)

ALIGNMENT_KINDS = ("scene", "object")


@dataclass(frozen=True)
class PretrainReport:
    steps: int
    final_loss: float
    scene_accuracy: float
    object_accuracy: float


def _projection(model: SoatModel, kind: str) -> LinearLayer:
    return model.scene_projection if kind == "scene" else model.object_projection


def alignment_logits(model: SoatModel, batch: AlignmentBatch) -> Tensor2:
    """B x B similarity: word i against feature j, scaled by 1/sqrt(d)."""
    words = F.take_rows(model.word_embeddings, batch.tokens)
    features = linear_forward(F.constant(batch.features, model.dtype), _projection(model, batch.kind))
    return F.scale(F.matmul(words, F.transpose(features)), 1.0 / math.sqrt(model.d_model))


def alignment_loss(model: SoatModel, batch: AlignmentBatch) -> Tensor2:
    """
    Mean of the word-to-feature and feature-to-word cross-entropies.

    Raises:
        DegenerateBatchError: if the batch has fewer than two pairs
    """
    size = len(batch.tokens)
    if size < 2:
        raise DegenerateBatchError(f"Contrastive batch of size {size} has no distractors")
    logits = alignment_logits(model, batch)
    diagonal = np.arange(size)
    terms = []
    for scores in (logits, F.transpose(logits)):
        log_probs = F.log_softmax_rows(scores)
        terms.append(F.concat_cols([F.pick(log_probs, i, i) for i in diagonal]))
    return F.scale(F.mean_all(F.concat_cols(terms)), -1.0)


def alignment_accuracy(model: SoatModel, batch: AlignmentBatch) -> float:
    """Fraction of words whose best-scoring feature is their own."""
    scores = alignment_logits(model, batch).data
    return float(np.mean(np.argmax(scores, axis=1) == np.arange(len(batch.tokens))))


def pretrain_parameters(model: SoatModel) -> dict[str, Parameter]:
    params = model.named_parameters()
    prefixes = ("embeddings.word", "projection.scene.", "projection.object.")
    return {name: p for name, p in params.items() if name == prefixes[0] or name.startswith(prefixes[1:])}


def pretrain_alignment(
    model: SoatModel,
    vocab: VocabSpec,
    feature_synth: FeatureSynth,
    steps: int,
    batch_size: int,
    learning_rate: float,
    rng: np.random.Generator,
    eval_batches: int = 8,
) -> PretrainReport:
    """
    Train word embeddings and input projections on synthetic alignment pairs.

    feature_synth is only read; its tables are never modified.
    """
    params = pretrain_parameters(model)
    optimizer = AdamW(params, lr=learning_rate, weight_decay=0.0)
    loss_value = float("nan")
    for step_index in range(steps):
        batches = [feature_synth.alignment_batch(vocab, kind, batch_size, rng) for kind in ALIGNMENT_KINDS]
        with GradTape() as tape:
            loss = F.add(*(alignment_loss(model, b) for b in batches))
        tape.backward(loss)
        optimizer.step(tape.parameter_grads(params))
        model.bump_version()
        loss_value = loss.item()
        if step_index % 100 == 0:
            logger.debug("pretrain_step: step=%d, loss=%.6f", step_index, loss_value)

    held_out = {
        kind: [feature_synth.alignment_batch(vocab, kind, batch_size, rng) for _ in range(eval_batches)]
        for kind in ALIGNMENT_KINDS
    }
    report = PretrainReport(
        steps=steps,
        final_loss=loss_value,
        scene_accuracy=float(np.mean([alignment_accuracy(model, b) for b in held_out["scene"]])),
        object_accuracy=float(np.mean([alignment_accuracy(model, b) for b in held_out["object"]])),
    )
    logger.info(
        "pretrain_finished: steps=%d, loss=%.6f, scene_accuracy=%.4f, object_accuracy=%.4f",
        report.steps,
        report.final_loss,
        report.scene_accuracy,
        report.object_accuracy,
    )
    return report
