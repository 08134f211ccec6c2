"""
Verification suite: mask invariants, gradient checks, cache equivalence and metric oracles.

Each check builds its own tiny model and worlds from the suite seed and
returns a CheckResult; the CLI runs them as orchestrator steps.
"""
from collections.abc import Callable
from functools import lru_cache
import math

import networkx as nx
import numpy as np

from core.agent import ModelConfig, SoatModel, aggregate_views, cached_step_equivalence, encode_step, init_state, step
from core.application.dtos import CheckResult
from core.application.training import bc_loss
from core.domain.entities import Episode, NavGraph, Trajectory
from core.domain.enums import MaskPattern, SplitName
from core.domain.masks import build_mask, layout_from_observation
from core.domain.metrics import navigation_error, ndtw_from_points
from core.domain.value_objects import CandidateView, Direction, PolicyVariant
from core.env import FeatureSynth, NavigationSession, VocabSpec, generate_dataset, generate_world, sample_episode
from core.infrastructure.logging import get_logger
from core.nn import EncoderLayer, encoder_layer_forward, grad_check_report
from core.nn import functional as F
from core.settings import EnvSettings

from .evaluation_service import EvaluationService

logger = get_logger(__name__)

Check = Callable[[], CheckResult]

NUM_SCENE_CLASSES = 4
NUM_OBJECT_CLASSES = 8
FEATURE_DIM = 8
# finite-difference noise floor at epsilon 1e-5; key biases have exactly zero gradient
GRAD_ABS_TOL = 1e-8
FULL = PolicyVariant(MaskPattern.SELECTIVE_OBJECT, object_features=True, view_aggregation=True)


def tiny_model_config(vocab: VocabSpec) -> ModelConfig:
    return ModelConfig(
        vocab_size=vocab.size,
        scene_dim=FEATURE_DIM,
        object_dim=FEATURE_DIM,
        d_model=16,
        num_heads=2,
        num_layers=2,
        d_ff=32,
        direction_dim=8,
        max_instruction_len=32,
        init_std=0.3,
    )


def random_views(rng: np.random.Generator, max_views: int = 5, max_objects: int = 3) -> list[CandidateView]:
    """Random navigable views (some without objects) followed by the stop view."""
    num_views = int(rng.integers(1, max_views + 1))
    views = []
    for v in range(num_views):
        count = int(rng.integers(0, max_objects + 1))
        views.append(
            CandidateView(
                view_id=v,
                scene_feature=rng.normal(size=FEATURE_DIM),
                object_features=tuple(rng.normal(size=FEATURE_DIM) for _ in range(count)),
                direction=Direction(float(rng.uniform(-math.pi, math.pi)), float(rng.uniform(-0.5, 0.5))),
                target_node=v + 1,
            )
        )
    views.append(CandidateView.stop(num_views, 0, FEATURE_DIM))
    return views


def random_instruction(rng: np.random.Generator, vocab: VocabSpec, max_len: int = 8) -> list[int]:
    length = int(rng.integers(1, max_len + 1))
    return [int(t) for t in rng.integers(VocabSpec.NUM_RESERVED, vocab.size, size=length)]


def bruteforce_dtw(query: np.ndarray, reference: np.ndarray) -> float:
    """Minimum cost over every monotone warping path, enumerated explicitly."""
    n, m = len(query), len(reference)
    best = math.inf

    def walk(i: int, j: int, acc: float) -> None:
        nonlocal best
        acc += float(np.linalg.norm(query[i] - reference[j]))
        if acc >= best:
            return
        if i == n - 1 and j == m - 1:
            best = acc
            return
        if i + 1 < n:
            walk(i + 1, j, acc)
        if j + 1 < m:
            walk(i, j + 1, acc)
        if i + 1 < n and j + 1 < m:
            walk(i + 1, j + 1, acc)

    walk(0, 0, 0.0)
    return best


def bruteforce_aggregate(
    scene_scores: np.ndarray, object_scores: np.ndarray, ownership: list[int]
) -> tuple[np.ndarray, int]:
    """Per-view best score by explicit candidate lists, and the lowest view holding the global best."""
    per_view = []
    for view, scene in enumerate(scene_scores):
        candidates = [scene] + [s for s, owner in zip(object_scores, ownership) if owner == view]
        per_view.append(max(candidates))
    every = list(scene_scores) + list(object_scores)
    top = max(every)
    owners = [v for v, s in enumerate(scene_scores) if s == top]
    owners += [ownership[k] for k, s in enumerate(object_scores) if s == top]
    return np.array(per_view), min(owners)


class VerificationService:
    """Builds the named checks; every check is deterministic in the suite seed."""

    def __init__(self, seed: int = 0, scale: float = 1.0) -> None:
        self._seed = seed
        self._scale = scale
        self._vocab = VocabSpec(NUM_SCENE_CLASSES, NUM_OBJECT_CLASSES)
        self._synth = FeatureSynth.create(seed, NUM_SCENE_CLASSES, NUM_OBJECT_CLASSES, FEATURE_DIM, FEATURE_DIM, 0.1)

    def _count(self, n: int) -> int:
        return max(1, int(round(n * self._scale)))

    def _rng(self, stream: int) -> np.random.Generator:
        return np.random.default_rng([self._seed, stream])

    def _model(self, offset: int = 0) -> SoatModel:
        return SoatModel.create(tiny_model_config(self._vocab), self._seed + offset)

    def _world(self, seed: int) -> NavGraph:
        return generate_world(seed, 14, NUM_SCENE_CLASSES, NUM_OBJECT_CLASSES, (0, 3), world_id=f"verify-{seed}")

    def _episode(self, graph: NavGraph, seed: int, hops: tuple[int, int] = (2, 4)) -> Episode:
        return sample_episode(graph, self._vocab, seed, hops[0], hops[1], max_instruction_len=32)

    def checks(self) -> list[tuple[str, Check]]:
        return [
            ("mask_freeze", self.check_mask_freeze),
            ("stop_logit_zero", self.check_stop_logit),
            ("grad_check_encoder_layer", self.check_grad_encoder_layer),
            ("grad_check_bc_episode", self.check_grad_bc_episode),
            ("aggregation_oracle", self.check_aggregation),
            ("object_permutation_invariance", self.check_permutation_invariance),
            ("kv_cache_equivalence", self.check_kv_cache),
            ("ndtw_bruteforce", self.check_ndtw),
            ("navigation_error_bellman_ford", self.check_navigation_error),
            ("teacher_policy_scores", self.check_teacher_policy),
        ]

    # ----------------------------------------------------------------- masks

    def check_mask_freeze(self, configurations: int = 100) -> CheckResult:
        """Instruction and scene rows leave the encoder stack bit-identical under selective-object."""
        rng = self._rng(1)
        model = self._model()
        n = self._count(configurations)
        for k in range(n):
            state = init_state(random_instruction(rng, self._vocab), model)
            views = random_views(rng)
            layout, out, raw_scene = encode_step(state, views, FULL, model)
            instr = out.data[list(layout.instr_range)]
            scene = out.data[list(layout.scene_range)]
            if not np.array_equal(instr, state.encoded_instruction.data):
                return CheckResult(name="mask_freeze", passed=False, detail=f"instruction rows changed (case {k})")
            if not np.array_equal(scene, raw_scene.data):
                return CheckResult(name="mask_freeze", passed=False, detail=f"scene rows changed (case {k})")
        return CheckResult(name="mask_freeze", passed=True, detail=f"{n} configurations bit-identical")

    def check_stop_logit(self, episodes: int = 50) -> CheckResult:
        """The stop logit is exactly 0 at every step of selective-object rollouts."""
        rng = self._rng(2)
        model = self._model()
        graph = self._world(self._seed)
        n = self._count(episodes)
        steps = 0
        for k in range(n):
            episode = self._episode(graph, self._seed * 1000 + k)
            session = NavigationSession(graph, episode, self._synth, max_steps=8)
            state = init_state(episode.instruction, model)
            while not session.done:
                dist, state = step(state, session.observe(), FULL, model, rng=rng)
                stop_logit = dist.logits.data[0, dist.stop_index]
                if stop_logit != 0.0:
                    return CheckResult(
                        name="stop_logit_zero", passed=False, detail=f"stop logit {stop_logit!r} in episode {k}"
                    )
                session.act(dist.chosen)
                steps += 1
        return CheckResult(name="stop_logit_zero", passed=True, detail=f"{steps} steps over {n} episodes")

    # ------------------------------------------------------------- gradients

    def check_grad_encoder_layer(self, tolerance: float = 1e-4) -> CheckResult:
        rng = self._rng(3)
        d = 8
        layer = EncoderLayer.create(rng, d, 2, 16, init_std=0.5)
        layout = layout_from_observation(3, 2, [1, 2])
        mask = build_mask(MaskPattern.SELECTIVE_OBJECT, layout)
        x = F.constant(rng.normal(size=(layout.num_tokens, d)))
        weights = F.constant(rng.normal(size=(layout.num_tokens, d)))

        def loss():
            return F.sum_all(F.mul(encoder_layer_forward(x, mask.matrix, layer, mask.update_set), weights))

        report = grad_check_report(loss, layer.named_parameters("layer"), epsilon=1e-5, abs_tol=GRAD_ABS_TOL)
        passed = report.max_relative_error < tolerance
        return CheckResult(
            name="grad_check_encoder_layer",
            passed=passed,
            detail=f"max relative error {report.max_relative_error:.3e} ({report.worst_parameter})",
        )

    def check_grad_bc_episode(self, tolerance: float = 1e-3) -> CheckResult:
        """Behaviour-cloning loss of a 2-hop episode (3 actions, stop included)."""
        model = self._model(offset=11)
        graph = self._world(self._seed + 1)
        episode = self._episode(graph, self._seed + 5, hops=(2, 2))

        def loss():
            return bc_loss(model, FULL, NavigationSession(graph, episode, self._synth)).loss

        report = grad_check_report(
            loss,
            model.named_parameters(),
            epsilon=1e-5,
            max_entries_per_param=2,
            rng=self._rng(4),
            abs_tol=GRAD_ABS_TOL,
        )
        passed = report.max_relative_error < tolerance
        return CheckResult(
            name="grad_check_bc_episode",
            passed=passed,
            detail=f"max relative error {report.max_relative_error:.3e} over {report.entries_checked} entries",
        )

    # ----------------------------------------------------------- aggregation

    def check_aggregation(self, steps: int = 1000) -> CheckResult:
        rng = self._rng(5)
        n = self._count(steps)
        for k in range(n):
            num_views = int(rng.integers(1, 6)) + 1
            counts = rng.integers(0, 4, size=num_views - 1)
            ownership = [v for v, c in enumerate(counts) for _ in range(int(c))]
            # small integer grid forces ties
            scene = rng.integers(-3, 4, size=num_views).astype(np.float64)
            objects = rng.integers(-3, 4, size=len(ownership)).astype(np.float64)
            scores, _ = aggregate_views(scene, objects, ownership)
            expected, expected_action = bruteforce_aggregate(scene, objects, ownership)
            if not np.array_equal(scores, expected) or int(np.argmax(scores)) != expected_action:
                return CheckResult(name="aggregation_oracle", passed=False, detail=f"mismatch at step {k}")
        return CheckResult(name="aggregation_oracle", passed=True, detail=f"{n} random steps")

    def check_permutation_invariance(self, steps: int = 200, tolerance: float = 1e-12) -> CheckResult:
        rng = self._rng(6)
        model = self._model()
        n = self._count(steps)
        worst = 0.0
        for _ in range(n):
            state = init_state(random_instruction(rng, self._vocab), model)
            views = random_views(rng)
            shuffled = [
                v if v.is_stop else v.with_objects(tuple(v.object_features[i] for i in rng.permutation(v.num_objects)))
                for v in views
            ]
            first, _ = step(state, views, FULL, model)
            second, _ = step(state, shuffled, FULL, model)
            worst = max(worst, float(np.max(np.abs(first.probabilities - second.probabilities))))
        return CheckResult(
            name="object_permutation_invariance",
            passed=worst <= tolerance,
            detail=f"max probability deviation {worst:.3e} over {n} steps",
        )

    def check_kv_cache(self, steps: int = 100, tolerance: float = 1e-12) -> CheckResult:
        rng = self._rng(7)
        model = self._model()
        n = self._count(steps)
        variants = (FULL, PolicyVariant(MaskPattern.SELECTIVE_SCENE, object_features=True, view_aggregation=True))
        worst = 0.0
        for k in range(n):
            state = init_state(random_instruction(rng, self._vocab), model)
            worst = max(worst, cached_step_equivalence(state, random_views(rng), variants[k % 2], model))
        return CheckResult(
            name="kv_cache_equivalence",
            passed=worst < tolerance,
            detail=f"max cached/naive deviation {worst:.3e} over {n} steps",
        )

    # --------------------------------------------------------------- metrics

    def check_ndtw(self, instances: int = 200, tolerance: float = 1e-9) -> CheckResult:
        rng = self._rng(8)
        n = self._count(instances)
        worst = 0.0
        for _ in range(n):
            query = rng.normal(scale=3.0, size=(int(rng.integers(1, 7)), 3))
            reference = rng.normal(scale=3.0, size=(int(rng.integers(1, 7)), 3))
            expected = math.exp(-bruteforce_dtw(query, reference) / (len(reference) * 3.0))
            worst = max(worst, abs(ndtw_from_points(query, reference, 3.0) - expected))
        return CheckResult(
            name="ndtw_bruteforce", passed=worst <= tolerance, detail=f"max deviation {worst:.3e} over {n} pairs"
        )

    def check_navigation_error(self, worlds: int = 5) -> CheckResult:
        rng = self._rng(9)
        checked = 0
        for w in range(self._count(worlds)):
            graph = self._world(self._seed + 100 + w)
            g = graph.graph
            for _ in range(20):
                end, goal = (int(x) for x in rng.integers(0, graph.num_nodes, size=2))
                expected = nx.bellman_ford_path_length(g, end, goal, weight="length")
                got = navigation_error(Trajectory(nodes=(end,), graph=graph), goal, graph)
                if got != expected and not math.isclose(got, expected, rel_tol=0.0, abs_tol=1e-12):
                    return CheckResult(
                        name="navigation_error_bellman_ford",
                        passed=False,
                        detail=f"NE {got} != Bellman-Ford {expected} (world {graph.world_id})",
                    )
                checked += 1
        return CheckResult(name="navigation_error_bellman_ford", passed=True, detail=f"{checked} node pairs")

    def check_teacher_policy(self) -> CheckResult:
        dataset = _teacher_dataset(self._seed)
        evaluator = EvaluationService(dataset)
        failures = []
        for split in SplitName:
            agg = evaluator.evaluate(split, FULL, policy="teacher").aggregate
            if agg.count and (agg.success_rate != 1.0 or abs(agg.spl - 1.0) > 1e-12 or agg.ndtw != 1.0):
                failures.append(f"{split.value}: sr={agg.success_rate}, spl={agg.spl}, ndtw={agg.ndtw}")
        return CheckResult(
            name="teacher_policy_scores",
            passed=not failures,
            detail="; ".join(failures) or "SR = SPL = NDTW = 1 on every split",
        )


@lru_cache(maxsize=4)
def _teacher_dataset(seed: int):
    env = EnvSettings(
        num_train_worlds=3,
        num_unseen_worlds=2,
        min_nodes=14,
        max_nodes=20,
        num_scene_classes=NUM_SCENE_CLASSES,
        num_object_classes=NUM_OBJECT_CLASSES,
        scene_feature_dim=FEATURE_DIM,
        object_feature_dim=FEATURE_DIM,
        train_episodes_per_world=4,
        val_seen_episodes_per_world=2,
        val_unseen_episodes_per_world=4,
    )
    return generate_dataset(env, seed, max_instruction_len=64)


def run_checks(service: VerificationService) -> list[CheckResult]:
    """Run every check serially, turning exceptions into failed results."""
    results = []
    for name, check in service.checks():
        try:
            results.append(check())
        except Exception as exc:
            logger.warning("verification_check_error: check=%s, error=%s", name, exc)
            results.append(CheckResult(name=name, passed=False, detail=f"{type(exc).__name__}: {exc}"))
    return results
