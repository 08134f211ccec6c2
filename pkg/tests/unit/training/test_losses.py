"""Tests for the behaviour-cloning and policy-gradient losses."""

import numpy as np
import pytest

from core.agent import RolloutMode, init_state, rollout, step
from core.application.training import bc_loss, episode_gradients, pg_loss, terminal_reward
from core.domain.entities import Episode, NavGraph
from core.env import NavigationSession, sample_episode
from core.nn import GradTape, grad_check_report
from core.nn import functional as F


@pytest.fixture
def episode(world, vocab):
    return sample_episode(world, vocab, 21, 2, 2, max_instruction_len=32)


def test_bc_loss_is_mean_negative_log_likelihood(model, full_variant, world, synth, episode):
    result = bc_loss(model, full_variant, NavigationSession(world, episode, synth))
    expected = -np.mean(
        [s.distribution.log_probs.data[0, s.teacher_action] for s in result.rollout.steps]
    )
    assert result.loss.item() == pytest.approx(expected, abs=1e-12)
    assert result.rollout.num_steps == 3


def test_bc_gradients_match_finite_differences(model, full_variant, world, synth, episode):
    def loss():
        return bc_loss(model, full_variant, NavigationSession(world, episode, synth)).loss

    report = grad_check_report(
        loss,
        model.named_parameters(),
        epsilon=1e-5,
        max_entries_per_param=1,
        rng=np.random.default_rng(0),
        abs_tol=1e-8,
    )
    assert report.max_relative_error < 1e-3


def test_episode_gradients_cover_every_parameter(model, full_variant, world, synth, episode):
    result = episode_gradients(
        "bc", model, lambda: bc_loss(model, full_variant, NavigationSession(world, episode, synth))
    )
    assert set(result.grads) == set(model.named_parameters())
    assert result.kind == "bc"
    assert result.steps == 3
    assert np.isfinite(result.loss)


def test_pg_loss_is_reproducible(model, full_variant, world, synth, episode):
    def run():
        return pg_loss(
            model,
            full_variant,
            NavigationSession(world, episode, synth, max_steps=6),
            np.random.default_rng(3),
            baseline=0.0,
        )

    a, b = run(), run()
    assert a.loss.item() == b.loss.item()
    assert a.rollout.trajectory.nodes == b.rollout.trajectory.nodes
    assert a.entropy > 0.0


def test_terminal_reward(model, full_variant, world, synth, episode):
    session = NavigationSession(world, episode, synth)
    run = rollout(model, full_variant, session, RolloutMode.TEACHER)
    assert terminal_reward(run, episode, world, step_penalty=0.1) == pytest.approx(1.0 - 0.1 * 3)


def test_pg_loss_with_return_equal_to_baseline_has_no_gradient(model, full_variant, world, synth, episode):
    result = episode_gradients(
        "pg",
        model,
        lambda: pg_loss(
            model,
            full_variant,
            NavigationSession(world, episode, synth, max_steps=6),
            np.random.default_rng(5),
            baseline=0.7,
            reward_fn=lambda run, ep, graph: 0.7,
        ),
    )
    assert result.loss == 0.0
    assert all(np.all(g == 0.0) for g in result.grads.values())


@pytest.fixture
def corridor(vocab):
    graph = NavGraph(
        world_id="corridor",
        positions=np.array([[0.0, 0.0, 0.0], [10.0, 0.0, 0.0]]),
        edges=((0, 1),),
        scene_classes=(1, 3),
        objects=(((2, 1.5),), ((5, 2.0), (0, 0.5))),
    )
    instruction = (vocab.scene_word(3), vocab.object_word(5), vocab.scene_word(1))
    episode = Episode("corridor-0", "corridor", 0, 1, (0, 1), instruction, object_ref_count=1, noise_seed=4)
    return graph, episode


def _flat(grads):
    return np.concatenate([grads[name].ravel() for name in sorted(grads)])


def _sequence_log_prob(model, variant, session, actions):
    state = init_state(session.episode.instruction, model)
    picks = []
    for action in actions:
        dist, state = step(state, session.observe(), variant, model, action=action)
        picks.append(F.pick(dist.log_probs, 0, action))
        session.act(action)
    assert session.done
    return F.sum_all(F.concat_cols(picks) if len(picks) > 1 else picks[0])


def test_pg_estimate_points_along_exact_gradient(model, full_variant, synth, corridor):
    graph, episode = corridor
    move, stop = 0, 1
    # With two moves allowed the only episodes are: stop, move-stop, move-move.
    sequences = {(stop,): 0.0, (move, stop): 1.0, (move, move): 0.0}

    def reach_goal(run, ep, g):
        return 1.0 if run.trajectory.nodes[-1] == ep.goal else 0.0

    probabilities = {}
    exact = None
    for actions, reward in sequences.items():
        with GradTape() as tape:
            log_p = _sequence_log_prob(model, full_variant, NavigationSession(graph, episode, synth, max_steps=2), actions)
        tape.backward(log_p)
        probabilities[actions] = float(np.exp(log_p.item()))
        term = reward * probabilities[actions] * _flat(tape.parameter_grads(model.named_parameters()))
        exact = term if exact is None else exact + term
    assert sum(probabilities.values()) == pytest.approx(1.0, abs=1e-9)
    expected_return = probabilities[(move, stop)]

    rng = np.random.default_rng(11)
    samples = 400
    estimate = np.zeros_like(exact)
    for _ in range(samples):
        result = episode_gradients(
            "pg",
            model,
            lambda: pg_loss(
                model,
                full_variant,
                NavigationSession(graph, episode, synth, max_steps=2),
                rng,
                baseline=expected_return,
                reward_fn=reach_goal,
            ),
        )
        estimate -= _flat(result.grads) / samples

    cosine = estimate @ exact / (np.linalg.norm(estimate) * np.linalg.norm(exact))
    assert cosine > 0.0
