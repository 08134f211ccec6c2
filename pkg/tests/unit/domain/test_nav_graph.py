"""Tests for NavGraph and Trajectory invariants."""

import math

import numpy as np
import pytest

from core.domain.entities import Episode, NavGraph, Trajectory


def _graph(edges, n=3, world_id="g") -> NavGraph:
    return NavGraph(
        world_id=world_id,
        positions=np.array([[float(i), float(i % 2), 0.0] for i in range(n)]),
        edges=edges,
        scene_classes=(0,) * n,
        objects=((),) * n,
    )


def test_edges_are_normalized_and_deduplicated():
    graph = _graph(((1, 0), (0, 1), (2, 1)))
    assert graph.edges == ((0, 1), (1, 2))
    assert graph.neighbors(1) == (0, 2)


def test_disconnected_graph_rejected():
    with pytest.raises(ValueError):
        _graph(((0, 1),), n=3)


def test_self_loop_rejected():
    with pytest.raises(ValueError):
        _graph(((0, 0), (0, 1), (1, 2)))


def test_geodesic_distance():
    graph = _graph(((0, 1), (1, 2)))
    assert graph.geodesic_distance(0, 2) == pytest.approx(2.0 * math.sqrt(2.0))
    assert graph.geodesic_distance(1, 1) == 0.0
    assert graph.hop_distance(0, 2) == 2


def test_content_hash_ignores_world_id():
    a = _graph(((0, 1), (1, 2)), world_id="a")
    b = _graph(((0, 1), (1, 2)), world_id="b")
    c = _graph(((0, 1), (0, 2)), world_id="c")
    assert a.content_hash() == b.content_hash()
    assert a.content_hash() != c.content_hash()


def test_trajectory_must_follow_edges():
    graph = _graph(((0, 1), (1, 2)))
    with pytest.raises(ValueError):
        Trajectory((0, 2), graph)
    assert Trajectory((0, 1, 2), graph).final_node == 2


def test_episode_path_must_run_start_to_goal():
    with pytest.raises(ValueError):
        Episode("e", "g", 0, 2, (0, 1), (5,), 0)
    with pytest.raises(ValueError):
        Episode("e", "g", 0, 1, (0, 1), (), 0)
