"""
Evaluation runner: roll a policy through a split, score every episode, aggregate.

Three policies share the runner: the trained model (greedy), the
shortest-path teacher and a seeded uniform-random policy.
"""
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Literal, Sequence

import numpy as np

from core.agent import RolloutMode, SoatModel, rollout
from core.application.dtos import (
    METRIC_NAMES,
    EpisodeMetrics,
    EvalSummary,
    MetricAggregate,
    MetricDelta,
    MetricReport,
    ReportComparison,
)
from core.domain.entities import Episode, Trajectory
from core.domain.enums import SplitName
from core.domain.metrics import score_episode
from core.domain.value_objects import PolicyVariant
from core.env import NavDataset, NavigationSession
from core.env.session import DEFAULT_MAX_STEPS
from core.infrastructure.logging import get_logger

logger = get_logger(__name__)

PolicyName = Literal["model", "teacher", "random"]
OBJECT_HEAVY_THRESHOLD = 6
HEAVY = "object_heavy"
LIGHT = "object_light"


def stratify_by_object_refs(
    episodes: Iterable[Episode], threshold: int = OBJECT_HEAVY_THRESHOLD
) -> tuple[list[Episode], list[Episode]]:
    """Split episodes into (heavy, light): heavy when object_ref_count >= threshold."""
    heavy, light = [], []
    for episode in episodes:
        (heavy if episode.object_ref_count >= threshold else light).append(episode)
    return heavy, light


def _teacher_trajectory(session: NavigationSession) -> tuple[Trajectory, int]:
    steps = 0
    while not session.done:
        session.act(session.teacher_action())
        steps += 1
    return session.trajectory(), steps


def _random_trajectory(session: NavigationSession, rng: np.random.Generator) -> tuple[Trajectory, int]:
    steps = 0
    while not session.done:
        session.act(int(rng.integers(len(session.observe()))))
        steps += 1
    return session.trajectory(), steps


class EvaluationService:
    """Runs one policy over a dataset split and builds a MetricReport."""

    def __init__(
        self,
        dataset: NavDataset,
        max_steps: int = DEFAULT_MAX_STEPS,
        object_heavy_threshold: int = OBJECT_HEAVY_THRESHOLD,
        workers: int = 1,
    ) -> None:
        self._dataset = dataset
        self._max_steps = max_steps
        self._threshold = object_heavy_threshold
        self._workers = max(1, workers)

    def _episodes(self, split: SplitName | str, max_episodes: int) -> list[Episode]:
        episodes = sorted(self._dataset.episodes(split), key=lambda e: e.episode_id)
        return episodes[:max_episodes] if max_episodes > 0 else episodes

    def _score(self, episode: Episode, trajectory: Trajectory, steps: int, stopped: bool) -> EpisodeMetrics:
        score = score_episode(trajectory, episode)
        return EpisodeMetrics(
            episode_id=episode.episode_id,
            world_id=episode.world_id,
            object_ref_count=episode.object_ref_count,
            stratum=HEAVY if episode.object_ref_count >= self._threshold else LIGHT,
            trajectory_length=score.trajectory_length,
            navigation_error=score.navigation_error,
            success=score.success,
            spl=score.spl,
            ndtw=score.ndtw,
            sdtw=score.sdtw,
            steps=steps,
            stopped=stopped,
            goal_reachable=score.goal_reachable,
        )

    def _runner(
        self,
        policy: PolicyName,
        model: SoatModel | None,
        variant: PolicyVariant,
        seed: int,
    ) -> Callable[[tuple[int, Episode]], EpisodeMetrics]:
        if policy == "model" and model is None:
            raise ValueError("The model policy needs a model")
        if policy not in ("model", "teacher", "random"):
            raise ValueError(f"Unknown policy {policy!r}")

        def run(item: tuple[int, Episode]) -> EpisodeMetrics:
            index, episode = item
            session = NavigationSession(
                self._dataset.world(episode.world_id),
                episode,
                self._dataset.feature_synth,
                max_steps=self._max_steps,
            )
            if policy == "teacher":
                trajectory, steps = _teacher_trajectory(session)
            elif policy == "random":
                trajectory, steps = _random_trajectory(session, np.random.default_rng([seed, index]))
            else:
                result = rollout(model, variant, session, RolloutMode.GREEDY)
                trajectory, steps = result.trajectory, result.num_steps
            return self._score(episode, trajectory, steps, session.stopped)

        return run

    def evaluate(
        self,
        split: SplitName | str,
        variant: PolicyVariant,
        model: SoatModel | None = None,
        policy: PolicyName = "model",
        seed: int = 0,
        checkpoint: str | None = None,
        max_episodes: int = 0,
    ) -> MetricReport:
        """
        Score every episode of split (or the first max_episodes by id).

        Rows are ordered by episode id whatever the worker count; the model
        is only read.
        """
        split = SplitName(split)
        episodes = self._episodes(split, max_episodes)
        run = self._runner(policy, model, variant, seed)
        items = list(enumerate(episodes))
        if self._workers > 1 and len(items) > 1:
            with ThreadPoolExecutor(max_workers=self._workers) as pool:
                rows = list(pool.map(run, items))
        else:
            rows = [run(item) for item in items]

        report = build_report(
            rows,
            split=split.value,
            policy=policy,
            variant=variant.name,
            seed=seed,
            checkpoint=checkpoint,
            object_heavy_threshold=self._threshold,
        )
        logger.info(
            "evaluation_finished: split=%s, policy=%s, variant=%s, episodes=%d, sr=%.4f, spl=%.4f, ndtw=%.4f",
            split.value,
            policy,
            variant.name,
            report.aggregate.count,
            report.aggregate.success_rate,
            report.aggregate.spl,
            report.aggregate.ndtw,
        )
        return report


def build_report(
    rows: Sequence[EpisodeMetrics],
    *,
    split: str,
    policy: str,
    variant: str,
    seed: int = 0,
    checkpoint: str | None = None,
    object_heavy_threshold: int = OBJECT_HEAVY_THRESHOLD,
) -> MetricReport:
    ordered = sorted(rows, key=lambda r: r.episode_id)
    return MetricReport(
        split=split,
        policy=policy,
        variant=variant,
        seed=seed,
        checkpoint=checkpoint,
        object_heavy_threshold=object_heavy_threshold,
        rows=ordered,
        aggregate=MetricAggregate.from_rows(ordered),
        strata={
            HEAVY: MetricAggregate.from_rows([r for r in ordered if r.stratum == HEAVY]),
            LIGHT: MetricAggregate.from_rows([r for r in ordered if r.stratum == LIGHT]),
        },
    )


def summarize(report: MetricReport) -> EvalSummary:
    agg = report.aggregate
    return EvalSummary(
        split=report.split,
        count=agg.count,
        success_rate=agg.success_rate,
        spl=agg.spl,
        ndtw=agg.ndtw,
        navigation_error=agg.navigation_error,
    )


def _deltas(baseline: MetricAggregate, candidate: MetricAggregate) -> list[MetricDelta]:
    return [
        MetricDelta(
            metric=name,
            baseline=baseline.metric(name),
            candidate=candidate.metric(name),
            delta=candidate.metric(name) - baseline.metric(name),
        )
        for name in METRIC_NAMES
    ]


def compare_reports(baseline: MetricReport, candidate: MetricReport) -> ReportComparison:
    """
    Per-metric candidate minus baseline, overall and per stratum.

    Raises:
        ValueError: if the reports cover different splits
    """
    if baseline.split != candidate.split:
        raise ValueError(f"Cannot compare a {baseline.split} report with a {candidate.split} report")
    strata = {
        name: _deltas(baseline.strata[name], candidate.strata[name])
        for name in sorted(set(baseline.strata) & set(candidate.strata))
    }
    return ReportComparison(
        baseline_label=f"{baseline.policy}:{baseline.variant}",
        candidate_label=f"{candidate.policy}:{candidate.variant}",
        split=baseline.split,
        overall=_deltas(baseline.aggregate, candidate.aggregate),
        strata=strata,
    )
