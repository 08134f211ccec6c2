"""Single-episode navigation session: observe, act, collect the trajectory."""

from core.domain.entities import Episode, NavGraph, Trajectory
from core.domain.value_objects import CandidateView

from .features import FeatureSynth
from .observation import render_observation
from .teacher import teacher_action

DEFAULT_MAX_STEPS = 15


class NavigationSession:
    """
    Mutable rollout state for one episode; confined to one worker.

    The episode ends when the agent selects the stop view or after max_steps
    moves, whichever comes first.
    """

    def __init__(
        self,
        graph: NavGraph,
        episode: Episode,
        feature_synth: FeatureSynth,
        max_steps: int = DEFAULT_MAX_STEPS,
    ):
        if episode.world_id != graph.world_id:
            raise ValueError(f"Episode {episode.episode_id} belongs to {episode.world_id}, not {graph.world_id}")
        self.graph = graph
        self.episode = episode
        self.feature_synth = feature_synth
        self.max_steps = max_steps
        self._nodes = [episode.start]
        self._came_from: int | None = None
        self._stopped = False
        self._views: list[CandidateView] | None = None

    @property
    def current(self) -> int:
        return self._nodes[-1]

    @property
    def timestep(self) -> int:
        return len(self._nodes) - 1

    @property
    def done(self) -> bool:
        return self._stopped or self.timestep >= self.max_steps

    @property
    def stopped(self) -> bool:
        """True when the episode ended by an explicit stop action."""
        return self._stopped

    def observe(self) -> list[CandidateView]:
        if self._views is None:
            self._views = render_observation(
                self.graph,
                self.current,
                self._came_from,
                self.feature_synth,
                noise_seed=self.episode.noise_seed,
                timestep=self.timestep,
            )
        return self._views

    def teacher_action(self) -> int:
        return teacher_action(self.graph, self.current, self.episode.goal)

    def act(self, view_index: int) -> None:
        """Move to the view's target node, or stop on the stop view."""
        if self.done:
            raise RuntimeError(f"Episode {self.episode.episode_id} is already finished")
        views = self.observe()
        if not 0 <= view_index < len(views):
            raise ValueError(f"Action {view_index} outside 0..{len(views) - 1}")
        view = views[view_index]
        if view.is_stop:
            self._stopped = True
        else:
            self._came_from = self.current
            self._nodes.append(view.target_node)
        self._views = None

    def trajectory(self) -> Trajectory:
        return Trajectory(nodes=tuple(self._nodes), graph=self.graph)
