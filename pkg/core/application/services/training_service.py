"""
Training loop: optional alignment pretraining, then mixed BC/PG iterations.

Every iteration i draws its batch and its sampling streams from
default_rng([seed, i, ...]), so a run resumed from the checkpoint taken at
iteration i replays iterations i+1.. exactly as the uninterrupted run.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
import time

import numpy as np

from core.agent import ModelConfig, SoatModel
from core.application.dtos import EvalSummary, PretrainLogRecord, TrainLogRecord
from core.application.interfaces import ICheckpointRepository
from core.application.training import (
    AdamW,
    EpisodeGradients,
    bc_loss,
    clip_global_norm,
    episode_gradients,
    pg_loss,
    pretrain_alignment,
    terminal_reward,
)
from core.application.training.checkpoint import TrainingCheckpoint
from core.data.repositories import TrainingLog
from core.domain.entities import Episode
from core.domain.enums import SplitName
from core.domain.exceptions import CheckpointError, DataError
from core.domain.value_objects import PolicyVariant
from core.env import NavDataset, NavigationSession
from core.infrastructure.logging import get_logger
from core.settings import AppSettings

from .evaluation_service import EvaluationService, summarize

logger = get_logger(__name__)

PRETRAIN_STREAM = 0x5052
PG_STREAM = 1
EVAL_SPLITS = (SplitName.VAL_SEEN, SplitName.VAL_UNSEEN)


@dataclass
class TrainingResult:
    iterations: int
    final_checkpoint: Path | None
    baseline: float
    evals: list[EvalSummary] = field(default_factory=list)


def checkpoint_path(out_dir: Path, iteration: int) -> Path:
    return Path(out_dir) / "checkpoints" / f"iter_{iteration:06d}.npz"


def latest_checkpoint_path(out_dir: Path) -> Path:
    return Path(out_dir) / "checkpoints" / "latest.npz"


def build_model(settings: AppSettings, dataset: NavDataset) -> SoatModel:
    config = ModelConfig.from_settings(settings.model, settings.env, dataset.vocab.size)
    return SoatModel.create(config, settings.run.seed)


def restore_model(checkpoint: TrainingCheckpoint) -> SoatModel:
    """
    Rebuild a model from a checkpoint.

    Raises:
        CheckpointError: on an unusable config echo or parameter mismatch
    """
    try:
        config = ModelConfig.from_dict(dict(checkpoint.model_config))
    except (TypeError, ValueError) as exc:
        raise CheckpointError(f"Checkpoint carries an invalid model config: {exc}") from exc
    model = SoatModel.create(config, seed=0)
    model.load_state_dict(checkpoint.parameters)
    return model


class TrainingService:
    """Runs train_loop for one policy variant and writes checkpoints and the training log."""

    def __init__(
        self,
        dataset: NavDataset,
        settings: AppSettings,
        variant: PolicyVariant,
        checkpoints: ICheckpointRepository,
        out_dir: Path,
    ) -> None:
        self._dataset = dataset
        self._settings = settings
        self._variant = variant
        self._checkpoints = checkpoints
        self._out = Path(out_dir)
        self._log = TrainingLog(self._out)
        self._train_episodes = sorted(dataset.episodes(SplitName.TRAIN), key=lambda e: e.episode_id)
        if not self._train_episodes:
            raise DataError("Training split is empty")

    @property
    def log(self) -> TrainingLog:
        return self._log

    # ------------------------------------------------------------------ setup

    def _pretrain(self, model: SoatModel) -> None:
        cfg = self._settings.train
        synth = self._dataset.feature_synth
        fingerprint = synth.fingerprint()
        report = pretrain_alignment(
            model,
            self._dataset.vocab,
            synth,
            steps=cfg.pretrain_steps,
            batch_size=cfg.pretrain_batch_size,
            learning_rate=cfg.pretrain_learning_rate,
            rng=np.random.default_rng([self._settings.run.seed, PRETRAIN_STREAM]),
        )
        if synth.fingerprint() != fingerprint:
            raise DataError("Alignment pretraining modified the feature synthesizer")
        self._log.append(
            PretrainLogRecord(
                steps=report.steps,
                final_loss=report.final_loss,
                scene_accuracy=report.scene_accuracy,
                object_accuracy=report.object_accuracy,
            )
        )

    def _resume(self, model: SoatModel, optimizer: AdamW, path: Path) -> tuple[int, float]:
        ckpt = self._checkpoints.load(path)
        if dict(ckpt.model_config) != model.config.to_dict():
            raise CheckpointError(f"Checkpoint {path} was trained with a different model config")
        if ckpt.variant and ckpt.variant != self._variant.name:
            raise CheckpointError(f"Checkpoint {path} holds variant {ckpt.variant}, not {self._variant.name}")
        model.load_state_dict(ckpt.parameters)
        optimizer.load_state_dict(ckpt.optimizer)
        self._log.truncate_after(ckpt.iteration)
        logger.info("training_resumed: checkpoint=%s, iteration=%d", path, ckpt.iteration)
        return ckpt.iteration, ckpt.baseline

    def _save(self, model: SoatModel, optimizer: AdamW, iteration: int, baseline: float) -> Path:
        ckpt = TrainingCheckpoint(
            model_config=model.config.to_dict(),
            parameters=model.state_dict(),
            iteration=iteration,
            optimizer=optimizer.state_dict(),
            baseline=baseline,
            variant=self._variant.name,
            run_config=self._settings.to_flat(),
        )
        path = self._checkpoints.save(checkpoint_path(self._out, iteration), ckpt)
        self._checkpoints.save(latest_checkpoint_path(self._out), ckpt)
        return path

    # ------------------------------------------------------------- iteration

    def _session(self, episode: Episode) -> NavigationSession:
        return NavigationSession(
            self._dataset.world(episode.world_id),
            episode,
            self._dataset.feature_synth,
            max_steps=self._settings.train.max_episode_steps,
        )

    def _batch(self, iteration: int) -> list[Episode]:
        cfg = self._settings.train
        rng = np.random.default_rng([self._settings.run.seed, iteration])
        size = len(self._train_episodes)
        picks = rng.choice(size, size=cfg.batch_size, replace=cfg.batch_size > size)
        return [self._train_episodes[int(k)] for k in picks]

    def _episode_job(self, model: SoatModel, iteration: int, baseline: float):
        cfg = self._settings.train
        seed = self._settings.run.seed
        num_bc = int(round(cfg.bc_fraction * cfg.batch_size))

        def reward(run, episode, graph) -> float:
            return terminal_reward(run, episode, graph, step_penalty=cfg.step_penalty)

        def job(item: tuple[int, Episode]) -> EpisodeGradients:
            k, episode = item
            if k < num_bc:
                return episode_gradients("bc", model, lambda: bc_loss(model, self._variant, self._session(episode)))
            rng = np.random.default_rng([seed, iteration, PG_STREAM, k])
            return episode_gradients(
                "pg",
                model,
                lambda: pg_loss(
                    model,
                    self._variant,
                    self._session(episode),
                    rng,
                    baseline,
                    reward_fn=reward,
                    entropy_weight=cfg.entropy_weight,
                ),
            )

        return job

    def _collect(self, model: SoatModel, iteration: int, baseline: float, workers: int) -> list[EpisodeGradients]:
        items = list(enumerate(self._batch(iteration)))
        job = self._episode_job(model, iteration, baseline)
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                return list(pool.map(job, items))
        return [job(item) for item in items]

    @staticmethod
    def _reduce(results: list[EpisodeGradients]) -> dict[str, np.ndarray]:
        grads: dict[str, np.ndarray] = {}
        for result in results:
            for name, grad in result.grads.items():
                if name in grads:
                    grads[name] = grads[name] + grad
                else:
                    grads[name] = grad.copy()
        scale = 1.0 / len(results)
        return {name: grad * scale for name, grad in grads.items()}

    def _evaluate(self, model: SoatModel, workers: int) -> list[EvalSummary]:
        cfg = self._settings
        evaluator = EvaluationService(
            self._dataset,
            max_steps=cfg.train.max_episode_steps,
            object_heavy_threshold=cfg.eval.object_heavy_threshold,
            workers=workers,
        )
        return [
            summarize(
                evaluator.evaluate(
                    split,
                    self._variant,
                    model=model,
                    seed=cfg.run.seed,
                    max_episodes=cfg.train.eval_episodes,
                )
            )
            for split in EVAL_SPLITS
            if self._dataset.episodes(split)
        ]

    # ------------------------------------------------------------------ loop

    def train(self, resume_from: Path | None = None, workers: int = 1) -> TrainingResult:
        """
        Run train_loop to settings.train.iterations.

        Args:
            resume_from: checkpoint to continue from; the training log is cut
                back to its iteration
            workers: rollout threads; 1 gives bitwise-reproducible logs

        Raises:
            CheckpointError: on unreadable or mismatched checkpoints
            NumericError: on non-finite losses or gradients
        """
        cfg = self._settings.train
        model = build_model(self._settings, self._dataset)
        optimizer = AdamW(
            model.named_parameters(),
            lr=cfg.learning_rate,
            betas=(cfg.beta1, cfg.beta2),
            eps=cfg.adam_eps,
            weight_decay=cfg.weight_decay,
        )

        if resume_from is not None:
            start, baseline = self._resume(model, optimizer, Path(resume_from))
        else:
            self._log.reset()
            start, baseline = 0, 0.0
            if cfg.pretrain and cfg.pretrain_steps > 0:
                self._pretrain(model)

        logger.info(
            "training_starting: variant=%s, start=%d, iterations=%d, batch_size=%d, workers=%d, parameters=%d",
            self._variant.name,
            start,
            cfg.iterations,
            cfg.batch_size,
            workers,
            model.num_parameters(),
        )

        final_checkpoint: Path | None = None
        evals: list[EvalSummary] = []
        for iteration in range(start + 1, cfg.iterations + 1):
            started = time.perf_counter()
            results = self._collect(model, iteration, baseline, workers)
            grads = self._reduce(results)
            grad_norm = clip_global_norm(grads, cfg.grad_clip)
            optimizer.step(grads)
            model.bump_version()

            bc = [r for r in results if r.kind == "bc"]
            pg = [r for r in results if r.kind == "pg"]
            for r in pg:
                baseline = cfg.baseline_decay * baseline + (1.0 - cfg.baseline_decay) * r.episode_return

            evals = []
            if (cfg.eval_every and iteration % cfg.eval_every == 0) or iteration == cfg.iterations:
                evals = self._evaluate(model, workers)

            record = TrainLogRecord(
                iteration=iteration,
                bc_episodes=len(bc),
                pg_episodes=len(pg),
                bc_loss=float(np.mean([r.loss for r in bc])) if bc else None,
                pg_loss=float(np.mean([r.loss for r in pg])) if pg else None,
                mean_return=float(np.mean([r.episode_return for r in pg])) if pg else None,
                entropy=float(np.mean([r.entropy for r in pg])) if pg else None,
                baseline=baseline,
                grad_norm=grad_norm,
                learning_rate=cfg.learning_rate,
                evals=evals,
            )
            self._log.append(record, wall_seconds=time.perf_counter() - started)
            logger.debug(
                "train_iteration: iteration=%d, bc_loss=%s, pg_loss=%s, grad_norm=%.4f",
                iteration,
                record.bc_loss,
                record.pg_loss,
                grad_norm,
            )
            for summary in evals:
                logger.info(
                    "train_eval: iteration=%d, split=%s, sr=%.4f, spl=%.4f",
                    iteration,
                    summary.split,
                    summary.success_rate,
                    summary.spl,
                )

            if (cfg.checkpoint_every and iteration % cfg.checkpoint_every == 0) or iteration == cfg.iterations:
                final_checkpoint = self._save(model, optimizer, iteration, baseline)

        if final_checkpoint is None:
            final_checkpoint = self._save(model, optimizer, max(start, cfg.iterations), baseline)

        logger.info("training_finished: iterations=%d, checkpoint=%s", cfg.iterations, final_checkpoint)
        return TrainingResult(
            iterations=cfg.iterations,
            final_checkpoint=final_checkpoint,
            baseline=baseline,
            evals=evals,
        )
