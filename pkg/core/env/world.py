"""
Random geometric world generator.

Nodes are scattered uniformly in a square box whose side is chosen so that
the expected degree of the radius graph is target_degree. Components left
disconnected are joined by the cross-component edges of a Euclidean minimum
spanning tree, so every generated world is connected.
"""
import math

import networkx as nx
import numpy as np

from core.domain.entities import NavGraph
from core.domain.exceptions import GenerationError
from core.infrastructure.logging import get_logger

logger = get_logger(__name__)

DEFAULT_CONNECT_RADIUS_M = 3.5
DEFAULT_TARGET_DEGREE = 4.0
ELEVATION_NOISE_M = 0.15
OBJECT_SIZE_RANGE = (0.2, 2.0)


def _validate(
    num_nodes: int,
    num_scene_classes: int,
    num_object_classes: int,
    objects_per_node_range: tuple[int, int],
    connect_radius: float,
    target_degree: float,
) -> None:
    low, high = objects_per_node_range
    problems = []
    if num_nodes < 2:
        problems.append(f"num_nodes={num_nodes} (need >= 2)")
    if num_scene_classes < 1:
        problems.append(f"num_scene_classes={num_scene_classes}")
    if num_object_classes < 1 and high > 0:
        problems.append(f"num_object_classes={num_object_classes} with objects requested")
    if low < 0 or high < low:
        problems.append(f"objects_per_node_range={objects_per_node_range}")
    if connect_radius <= 0 or target_degree <= 0:
        problems.append(f"connect_radius={connect_radius}, target_degree={target_degree}")
    if problems:
        raise GenerationError("Infeasible world parameters: " + "; ".join(problems))


def _bridge_components(graph: nx.Graph, positions: np.ndarray) -> int:
    """Add minimum-spanning-tree edges between components; returns edges added."""
    components = list(nx.connected_components(graph))
    if len(components) <= 1:
        return 0
    component_of = {node: i for i, comp in enumerate(components) for node in comp}
    complete = nx.Graph()
    n = positions.shape[0]
    for u in range(n):
        for v in range(u + 1, n):
            if component_of[u] != component_of[v]:
                complete.add_edge(u, v, weight=float(np.linalg.norm(positions[u] - positions[v])))
    # Existing edges cost nothing, so the tree only pays for bridges.
    complete.add_edges_from(graph.edges, weight=0.0)
    added = 0
    for u, v in nx.minimum_spanning_tree(complete, weight="weight").edges:
        if component_of[u] != component_of[v] and not graph.has_edge(u, v):
            graph.add_edge(u, v)
            added += 1
    return added


def generate_world(
    seed: int,
    num_nodes: int,
    num_scene_classes: int,
    num_object_classes: int,
    objects_per_node_range: tuple[int, int] = (0, 4),
    *,
    connect_radius: float = DEFAULT_CONNECT_RADIUS_M,
    target_degree: float = DEFAULT_TARGET_DEGREE,
    world_id: str | None = None,
) -> NavGraph:
    """
    Generate a connected navigation graph.

    Args:
        seed: world seed; the same arguments always give the same world
        num_nodes: number of navigable locations (>= 2)
        num_scene_classes: scene classes are drawn uniformly from this range
        num_object_classes: object classes are drawn uniformly from this range
        objects_per_node_range: inclusive (min, max) object count per node
        connect_radius: nodes closer than this (meters, horizontal) are joined
        target_degree: mean degree the box size is tuned for

    Raises:
        GenerationError: for infeasible parameters
    """
    _validate(
        num_nodes, num_scene_classes, num_object_classes, objects_per_node_range, connect_radius, target_degree
    )
    rng = np.random.default_rng(seed)
    side = math.sqrt(num_nodes * math.pi * connect_radius**2 / target_degree)
    xy = rng.uniform(0.0, side, size=(num_nodes, 2))
    z = rng.normal(0.0, ELEVATION_NOISE_M, size=(num_nodes, 1))
    positions = np.hstack([xy, z])

    graph = nx.random_geometric_graph(
        num_nodes, connect_radius, pos={i: xy[i] for i in range(num_nodes)}
    )
    bridged = _bridge_components(graph, positions)

    scene_classes = rng.integers(0, num_scene_classes, size=num_nodes)
    low, high = objects_per_node_range
    objects = []
    for _ in range(num_nodes):
        count = int(rng.integers(low, high + 1))
        classes = rng.integers(0, max(num_object_classes, 1), size=count)
        sizes = rng.uniform(*OBJECT_SIZE_RANGE, size=count)
        objects.append(tuple((int(c), float(s)) for c, s in zip(classes, sizes)))

    try:
        world = NavGraph(
            world_id=world_id or f"world-{seed}",
            positions=positions,
            edges=tuple((int(u), int(v)) for u, v in graph.edges),
            scene_classes=tuple(int(c) for c in scene_classes),
            objects=tuple(objects),
        )
    except ValueError as exc:
        raise GenerationError(f"Generated world is invalid (seed={seed}): {exc}") from exc

    logger.debug(
        "world_generated: world_id=%s, nodes=%d, edges=%d, bridged=%d",
        world.world_id,
        world.num_nodes,
        len(world.edges),
        bridged,
    )
    return world
