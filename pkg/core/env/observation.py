"""Rendering of a node into candidate views (navigable neighbors plus stop)."""

import math

import numpy as np

from core.domain.entities import NavGraph
from core.domain.value_objects import CandidateView, Direction

from .features import FeatureSynth


def _wrap(angle: float) -> float:
    """Wrap to (-pi, pi]."""
    wrapped = math.atan2(math.sin(angle), math.cos(angle))
    return math.pi if wrapped == -math.pi else wrapped


def _horizontal_heading(delta: np.ndarray) -> float:
    return math.atan2(float(delta[1]), float(delta[0]))


def relative_direction(graph: NavGraph, node: int, neighbor: int, came_from: int | None) -> Direction:
    """
    Heading of neighbor relative to the direction of travel, elevation from the z difference.

    The agent faces along came_from -> node; at episode start (came_from None)
    headings are absolute, measured from the +x axis.
    """
    here = graph.position(node)
    delta = graph.position(neighbor) - here
    heading = _horizontal_heading(delta)
    if came_from is not None:
        heading -= _horizontal_heading(here - graph.position(came_from))
    horizontal = math.hypot(float(delta[0]), float(delta[1]))
    elevation = math.atan2(float(delta[2]), horizontal)
    return Direction(heading=_wrap(heading), elevation=elevation)


def noise_stream(noise_seed: int, timestep: int, node: int) -> np.random.Generator:
    """Per-episode, per-step noise generator; rendering never shares an rng."""
    return np.random.default_rng([noise_seed, timestep, node])


def render_observation(
    graph: NavGraph,
    node: int,
    came_from: int | None,
    feature_synth: FeatureSynth,
    *,
    noise_seed: int = 0,
    timestep: int = 0,
) -> list[CandidateView]:
    """
    Candidate views at node: one per neighbor in ascending id order, then stop.

    Each neighbor's scene feature is its scene-class embedding plus noise;
    its objects (largest first) are their class embeddings plus noise.
    """
    if not 0 <= node < graph.num_nodes:
        raise ValueError(f"Node {node} is not in world {graph.world_id}")
    rng = noise_stream(noise_seed, timestep, node)
    views = []
    for view_id, neighbor in enumerate(graph.neighbors(node)):
        scene = feature_synth.scene_feature(graph.scene_classes[neighbor], rng)
        ordered = sorted(graph.objects[neighbor], key=lambda obj: (-obj[1], obj[0]))
        objects = tuple(feature_synth.object_feature(c, rng) for c, _size in ordered)
        views.append(
            CandidateView(
                view_id=view_id,
                scene_feature=scene,
                object_features=objects,
                direction=relative_direction(graph, node, neighbor, came_from),
                target_node=neighbor,
            )
        )
    views.append(CandidateView.stop(len(views), node, feature_synth.scene_dim))
    return views
