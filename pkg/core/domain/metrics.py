"""
Navigation evaluation metrics: TL, NE, SR, SPL, NDTW, SDTW.

All distances are meters. Success is strict: NE < 3.0 m.
"""
from dataclasses import dataclass
import math

import numpy as np

from .entities import Episode, NavGraph, Trajectory

SUCCESS_THRESHOLD_M = 3.0


@dataclass(frozen=True)
class EpisodeScore:
    """The six metrics for one episode."""

    trajectory_length: float
    navigation_error: float
    success: int
    spl: float
    ndtw: float
    sdtw: float
    goal_reachable: bool = True


def trajectory_length(traj: Trajectory) -> float:
    """Sum of edge lengths along the visited sequence."""
    nodes = traj.nodes
    return float(sum(traj.graph.edge_length(u, v) for u, v in zip(nodes, nodes[1:])))


def navigation_error(traj: Trajectory, goal: int, graph: NavGraph) -> float:
    """Geodesic distance from the final node to goal; inf when unreachable."""
    if not 0 <= goal < graph.num_nodes:
        raise ValueError(f"Goal {goal} is not a node of world {graph.world_id}")
    return graph.geodesic_distance(traj.final_node, goal)


def success(
    traj: Trajectory, goal: int, graph: NavGraph, threshold: float = SUCCESS_THRESHOLD_M
) -> int:
    """1 iff the navigation error is strictly below threshold."""
    return int(navigation_error(traj, goal, graph) < threshold)


def spl(traj: Trajectory, episode: Episode, threshold: float = SUCCESS_THRESHOLD_M) -> float:
    """
    Success weighted by path length: S * l / max(p, l).

    When start == goal the shortest length is 0 and SPL is defined as S.
    """
    graph = traj.graph
    s = success(traj, episode.goal, graph, threshold)
    shortest = graph.geodesic_distance(episode.start, episode.goal)
    if shortest == 0.0:
        return float(s)
    taken = trajectory_length(traj)
    return s * shortest / max(taken, shortest)


def dtw_distance(query: np.ndarray, reference: np.ndarray) -> float:
    """
    Dynamic time warping cost between two point sequences.

    Point cost is the Euclidean distance; the O(|P||R|) dynamic program
    allows match, insertion and deletion moves.
    """
    query = np.atleast_2d(np.asarray(query, dtype=np.float64))
    reference = np.atleast_2d(np.asarray(reference, dtype=np.float64))
    n, m = len(query), len(reference)
    if n == 0 or m == 0:
        raise ValueError("DTW needs two non-empty sequences")

    cost = np.linalg.norm(query[:, None, :] - reference[None, :, :], axis=-1)
    dtw = np.full((n + 1, m + 1), np.inf)
    dtw[0, 0] = 0.0
    for i in range(n):
        for j in range(m):
            dtw[i + 1, j + 1] = cost[i, j] + min(
                dtw[i, j + 1],  # insertion
                dtw[i + 1, j],  # deletion
                dtw[i, j],  # match
            )
    return float(dtw[n, m])


def ndtw_from_points(
    query: np.ndarray, reference: np.ndarray, threshold: float = SUCCESS_THRESHOLD_M
) -> float:
    """exp(-DTW(P, R) / (|R| * threshold))."""
    reference = np.atleast_2d(np.asarray(reference, dtype=np.float64))
    return math.exp(-dtw_distance(query, reference) / (len(reference) * threshold))


def ndtw(
    traj: Trajectory,
    reference_path: tuple[int, ...],
    graph: NavGraph,
    threshold: float = SUCCESS_THRESHOLD_M,
) -> float:
    """Normalized DTW between the visited nodes and the reference path."""
    if not reference_path:
        raise ValueError("Reference path must be non-empty")
    return ndtw_from_points(traj.positions, graph.positions[list(reference_path)], threshold)


def sdtw(
    traj: Trajectory, episode: Episode, graph: NavGraph, threshold: float = SUCCESS_THRESHOLD_M
) -> float:
    """Success-gated NDTW."""
    return success(traj, episode.goal, graph, threshold) * ndtw(
        traj, episode.path, graph, threshold
    )


def score_episode(
    traj: Trajectory, episode: Episode, threshold: float = SUCCESS_THRESHOLD_M
) -> EpisodeScore:
    """All six metrics for one trajectory."""
    graph = traj.graph
    ne = navigation_error(traj, episode.goal, graph)
    nd = ndtw(traj, episode.path, graph, threshold)
    sr = int(ne < threshold)
    return EpisodeScore(
        trajectory_length=trajectory_length(traj),
        navigation_error=ne,
        success=sr,
        spl=spl(traj, episode, threshold),
        ndtw=nd,
        sdtw=sr * nd,
        goal_reachable=math.isfinite(ne),
    )
