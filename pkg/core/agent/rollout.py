"""Run the policy through one episode of a navigation session."""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from core.domain.entities import Trajectory
from core.domain.value_objects import PolicyVariant
from core.env.session import NavigationSession

from .model import SoatModel
from .policy import init_state, step
from .state import ActionDistribution


class RolloutMode(str, Enum):
    TEACHER = "teacher"
    SAMPLE = "sample"
    GREEDY = "greedy"


@dataclass
class RolloutStep:
    distribution: ActionDistribution
    action: int
    teacher_action: int | None = None


@dataclass
class Rollout:
    episode_id: str
    steps: list[RolloutStep] = field(default_factory=list)
    trajectory: Trajectory | None = None
    stopped: bool = False

    @property
    def num_steps(self) -> int:
        return len(self.steps)


def rollout(
    model: SoatModel,
    variant: PolicyVariant,
    session: NavigationSession,
    mode: RolloutMode = RolloutMode.GREEDY,
    rng: np.random.Generator | None = None,
) -> Rollout:
    """
    Drive session to completion.

    TEACHER follows the shortest-path teacher (behaviour cloning), SAMPLE
    draws from the action distribution (policy gradient), GREEDY takes the
    argmax (evaluation).
    """
    if mode is RolloutMode.SAMPLE and rng is None:
        raise ValueError("Sampling rollouts need an rng")
    state = init_state(session.episode.instruction, model)
    result = Rollout(episode_id=session.episode.episode_id)
    while not session.done:
        views = session.observe()
        teacher = session.teacher_action() if mode is RolloutMode.TEACHER else None
        distribution, state = step(
            state,
            views,
            variant,
            model,
            action=teacher,
            rng=rng if mode is RolloutMode.SAMPLE else None,
        )
        result.steps.append(RolloutStep(distribution, distribution.chosen, teacher))
        session.act(distribution.chosen)
    result.trajectory = session.trajectory()
    result.stopped = session.stopped
    return result
