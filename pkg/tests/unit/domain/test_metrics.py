"""Tests for TL, NE, SR, SPL, NDTW and SDTW."""

import math

import numpy as np
import pytest

from core.domain.entities import Episode, NavGraph, Trajectory
from core.domain.metrics import (
    dtw_distance,
    navigation_error,
    ndtw,
    ndtw_from_points,
    score_episode,
    spl,
    success,
    trajectory_length,
)


@pytest.fixture
def line() -> NavGraph:
    """Five nodes on the x axis, 2 m apart: 0 - 1 - 2 - 3 - 4."""
    return NavGraph(
        world_id="line",
        positions=np.array([[2.0 * i, 0.0, 0.0] for i in range(5)]),
        edges=tuple((i, i + 1) for i in range(4)),
        scene_classes=(0, 1, 0, 1, 0),
        objects=((), ((2, 1.0),), (), (), ()),
    )


def _episode(start: int, goal: int) -> Episode:
    path = tuple(range(start, goal + 1)) if goal >= start else tuple(range(start, goal - 1, -1))
    return Episode(
        episode_id=f"e{start}{goal}",
        world_id="line",
        start=start,
        goal=goal,
        path=path,
        instruction=(5,),
        object_ref_count=0,
    )


class TestDistanceMetrics:
    def test_trajectory_length(self, line):
        assert trajectory_length(Trajectory((0, 1, 2, 1), line)) == pytest.approx(6.0)
        assert trajectory_length(Trajectory((3,), line)) == 0.0

    def test_navigation_error_is_geodesic(self, line):
        assert navigation_error(Trajectory((0, 1), line), 4, line) == pytest.approx(6.0)

    def test_success_is_strict(self, line):
        # NE of exactly 2 m succeeds; 4 m fails
        assert success(Trajectory((0, 1), line), 2, line) == 1
        assert success(Trajectory((0,), line), 2, line) == 0

    def test_success_threshold_boundary(self):
        graph = NavGraph(
            world_id="gap",
            positions=np.array([[0.0, 0.0, 0.0], [3.0, 0.0, 0.0]]),
            edges=((0, 1),),
            scene_classes=(0, 0),
            objects=((), ()),
        )
        assert success(Trajectory((0,), graph), 1, graph) == 0

    def test_spl_detour(self, line):
        episode = _episode(0, 2)
        traj = Trajectory((0, 1, 0, 1, 2), line)
        assert spl(traj, episode) == pytest.approx(4.0 / 8.0)

    def test_spl_start_equals_goal(self, line):
        episode = Episode("same", "line", 2, 2, (2,), (5,), 0)
        assert spl(Trajectory((2,), line), episode) == 1.0
        assert spl(Trajectory((2, 3, 4), line), episode) == 0.0

    def test_unknown_goal(self, line):
        with pytest.raises(ValueError):
            navigation_error(Trajectory((0,), line), 9, line)


class TestDtw:
    def test_identical_paths(self, line):
        assert ndtw(Trajectory((0, 1, 2), line), (0, 1, 2), line) == 1.0

    def test_dtw_hand_computed(self):
        query = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [2.0, 0.0, 0.0]])
        reference = np.array([[0.0, 0.0, 0.0], [2.0, 0.0, 0.0]])
        # 0->0 (0) + 1->0 or 1->2 (1) + 2->2 (0)
        assert dtw_distance(query, reference) == pytest.approx(1.0)
        assert ndtw_from_points(query, reference) == pytest.approx(math.exp(-1.0 / 6.0))

    def test_ndtw_in_unit_interval(self, rng):
        for _ in range(20):
            p = rng.normal(size=(int(rng.integers(1, 6)), 3))
            r = rng.normal(size=(int(rng.integers(1, 6)), 3))
            assert 0.0 < ndtw_from_points(p, r) <= 1.0

    def test_appended_detour_never_raises_ndtw(self, line):
        reference = (0, 1, 2)
        nodes = [0, 1, 2]
        previous = ndtw(Trajectory(tuple(nodes), line), reference, line)
        # DTW after each append: 2, 6, 8, 8, 10
        for detour in (3, 4, 3, 2, 1):
            nodes.append(detour)
            current = ndtw(Trajectory(tuple(nodes), line), reference, line)
            assert current <= previous
            previous = current
        assert previous < 1.0

    def test_empty_sequence_rejected(self):
        with pytest.raises(ValueError):
            dtw_distance(np.zeros((0, 3)), np.zeros((1, 3)))


def test_score_episode(line):
    episode = _episode(0, 3)
    score = score_episode(Trajectory((0, 1, 2), line), episode)

    assert score.trajectory_length == pytest.approx(4.0)
    assert score.navigation_error == pytest.approx(2.0)
    assert score.success == 1
    assert score.spl == pytest.approx(1.0)
    assert score.sdtw == pytest.approx(score.ndtw)
    assert 0.0 < score.ndtw < 1.0
    assert score.goal_reachable
