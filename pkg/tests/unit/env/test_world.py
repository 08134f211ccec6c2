"""Tests for the random geometric world generator."""

import networkx as nx
import pytest

from core.domain.exceptions import GenerationError
from core.env import generate_world


def test_same_seed_same_world():
    a = generate_world(5, 20, 4, 8, (0, 3))
    b = generate_world(5, 20, 4, 8, (0, 3))
    assert a.content_hash() == b.content_hash()


def test_different_seed_different_world():
    assert generate_world(5, 20, 4, 8).content_hash() != generate_world(6, 20, 4, 8).content_hash()


@pytest.mark.parametrize("seed", range(10))
def test_generated_worlds_are_connected(seed):
    world = generate_world(seed, 25, 4, 8, target_degree=1.5)
    assert nx.is_connected(world.graph)
    assert world.num_nodes == 25


def test_object_counts_in_range():
    world = generate_world(3, 30, 4, 8, (1, 2))
    assert all(1 <= len(objs) <= 2 for objs in world.objects)
    assert all(0 <= c < 8 and 0.2 <= s <= 2.0 for objs in world.objects for c, s in objs)
    assert all(0 <= c < 4 for c in world.scene_classes)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(num_nodes=1),
        dict(num_scene_classes=0),
        dict(objects_per_node_range=(3, 1)),
        dict(connect_radius=0.0),
    ],
)
def test_infeasible_parameters(kwargs):
    args = dict(seed=0, num_nodes=10, num_scene_classes=4, num_object_classes=8)
    args.update(kwargs)
    with pytest.raises(GenerationError):
        generate_world(**args)
