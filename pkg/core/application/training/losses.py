"""
Behaviour-cloning and policy-gradient episode losses.

Both build their loss on the caller's active GradTape; episode_gradients
wraps the tape bookkeeping for one episode.
"""
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from core.agent import Rollout, RolloutMode, SoatModel, rollout
from core.domain.entities import Episode, NavGraph
from core.domain.exceptions import NumericError
from core.domain.metrics import SUCCESS_THRESHOLD_M, navigation_error
from core.domain.value_objects import PolicyVariant
from core.env import NavigationSession
from core.nn import GradTape, Tensor2
from core.nn import functional as F

DEFAULT_STEP_PENALTY = 0.01

RewardFn = Callable[[Rollout, Episode, NavGraph], float]


@dataclass
class EpisodeLoss:
    """Loss tensor of one episode plus scalars for logging."""

    loss: Tensor2
    rollout: Rollout
    episode_return: float = 0.0
    entropy: float = 0.0


def terminal_reward(
    run: Rollout, episode: Episode, graph: NavGraph, step_penalty: float = DEFAULT_STEP_PENALTY
) -> float:
    """+1 when the episode ends within the success radius, -1 otherwise, minus step_penalty per step."""
    ne = navigation_error(run.trajectory, episode.goal, graph)
    terminal = 1.0 if ne < SUCCESS_THRESHOLD_M else -1.0
    return terminal - step_penalty * run.num_steps


def bc_loss(model: SoatModel, variant: PolicyVariant, session: NavigationSession) -> EpisodeLoss:
    """
    Teacher-forced rollout; mean over steps of -log pi(teacher action).

    Raises:
        NumericError: on a non-finite loss
    """
    run = rollout(model, variant, session, RolloutMode.TEACHER)
    picks = [F.pick(s.distribution.log_probs, 0, s.teacher_action) for s in run.steps]
    total = F.concat_cols(picks) if len(picks) > 1 else picks[0]
    loss = F.scale(F.mean_all(total), -1.0)
    if not loss.is_finite():
        raise NumericError(f"Non-finite behaviour-cloning loss for {session.episode.episode_id}")
    return EpisodeLoss(loss=loss, rollout=run)


def _entropy(run: Rollout) -> Tensor2:
    terms = [
        F.sum_all(F.mul(F.softmax_rows(s.distribution.logits), s.distribution.log_probs)) for s in run.steps
    ]
    total = F.concat_cols(terms) if len(terms) > 1 else terms[0]
    return F.scale(F.sum_all(total), -1.0)


def pg_loss(
    model: SoatModel,
    variant: PolicyVariant,
    session: NavigationSession,
    rng: np.random.Generator,
    baseline: float,
    reward_fn: RewardFn | None = None,
    entropy_weight: float = 0.0,
) -> EpisodeLoss:
    """
    REINFORCE with a scalar baseline: -sum_t log pi(a_t) * (R - b) - entropy_weight * H.

    Raises:
        NumericError: on a non-finite loss
    """
    run = rollout(model, variant, session, RolloutMode.SAMPLE, rng=rng)
    reward_fn = reward_fn or terminal_reward
    episode_return = float(reward_fn(run, session.episode, session.graph))
    advantage = episode_return - baseline

    picks = [F.pick(s.distribution.log_probs, 0, s.action) for s in run.steps]
    log_likelihood = F.sum_all(F.concat_cols(picks) if len(picks) > 1 else picks[0])
    loss = F.scale(log_likelihood, -advantage)
    entropy = _entropy(run)
    if entropy_weight:
        loss = F.sub(loss, F.scale(entropy, entropy_weight))
    if not loss.is_finite():
        raise NumericError(f"Non-finite policy-gradient loss for {session.episode.episode_id}")
    return EpisodeLoss(loss=loss, rollout=run, episode_return=episode_return, entropy=entropy.item())


@dataclass
class EpisodeGradients:
    """Per-episode result of a worker: loss value and named parameter gradients."""

    kind: str
    episode_id: str
    loss: float
    grads: dict[str, np.ndarray]
    episode_return: float = 0.0
    entropy: float = 0.0
    steps: int = 0


def episode_gradients(
    kind: str, model: SoatModel, loss_fn: Callable[[], EpisodeLoss]
) -> EpisodeGradients:
    """Run loss_fn on a fresh tape and collect gradients for every model parameter."""
    with GradTape() as tape:
        result = loss_fn()
    tape.backward(result.loss)
    return EpisodeGradients(
        kind=kind,
        episode_id=result.rollout.episode_id,
        loss=result.loss.item(),
        grads=tape.parameter_grads(model.named_parameters()),
        episode_return=result.episode_return,
        entropy=result.entropy,
        steps=result.rollout.num_steps,
    )
