"""Tests for the shortest-path teacher."""

import numpy as np
import pytest

from core.domain.entities import NavGraph
from core.domain.exceptions import TeacherError
from core.env import teacher_action, teacher_next_node, teacher_path


@pytest.fixture
def square() -> NavGraph:
    """Unit square 0-1-3 and 0-2-3: two equal-length routes from 0 to 3."""
    return NavGraph(
        world_id="square",
        positions=np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, 0.0]]),
        edges=((0, 1), (0, 2), (1, 3), (2, 3)),
        scene_classes=(0, 1, 2, 3),
        objects=((), (), (), ()),
    )


def test_ties_go_to_lowest_node(square):
    assert teacher_next_node(square, 0, 3) == 1
    assert teacher_path(square, 0, 3) == (0, 1, 3)


def test_stop_at_goal(square):
    assert teacher_next_node(square, 3, 3) is None
    assert teacher_action(square, 3, 3) == len(square.neighbors(3))


def test_action_indexes_sorted_neighbors(square):
    assert teacher_action(square, 3, 0) == square.neighbors(3).index(1)


def test_unknown_goal(square):
    with pytest.raises(TeacherError):
        teacher_next_node(square, 0, 7)


def test_teacher_paths_are_shortest(world):
    for goal in range(world.num_nodes):
        path = teacher_path(world, 0, goal)
        length = sum(world.edge_length(u, v) for u, v in zip(path, path[1:]))
        assert length == pytest.approx(world.geodesic_distance(0, goal), abs=1e-9)
