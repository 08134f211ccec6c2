"""Shortest-path teacher used for behaviour-cloning supervision and reference paths."""

from core.domain.entities import NavGraph
from core.domain.exceptions import TeacherError

TIE_TOLERANCE = 1e-9


def teacher_next_node(graph: NavGraph, current: int, goal: int) -> int | None:
    """
    Neighbor of current on a geodesic shortest path to goal, None at the goal.

    Ties within TIE_TOLERANCE meters go to the lowest node id.

    Raises:
        TeacherError: if goal is not a node or is unreachable from current
    """
    if not 0 <= goal < graph.num_nodes or not 0 <= current < graph.num_nodes:
        raise TeacherError(f"Nodes {current} -> {goal} are not both in world {graph.world_id}")
    if current == goal:
        return None
    distances = graph.distances_to(goal)
    if current not in distances:
        raise TeacherError(f"Goal {goal} is unreachable from {current} in world {graph.world_id}")

    best_node, best_cost = None, float("inf")
    for neighbor in graph.neighbors(current):
        if neighbor not in distances:
            continue
        cost = graph.edge_length(current, neighbor) + distances[neighbor]
        if cost < best_cost - TIE_TOLERANCE:
            best_node, best_cost = neighbor, cost
    if best_node is None:
        raise TeacherError(f"No neighbor of {current} leads to goal {goal}")
    return best_node


def teacher_action(graph: NavGraph, current: int, goal: int) -> int:
    """
    Candidate view index of the teacher's move.

    Views are the neighbors in ascending id order followed by the stop
    pseudo-view, so stop is len(neighbors).
    """
    neighbors = graph.neighbors(current)
    nxt = teacher_next_node(graph, current, goal)
    if nxt is None:
        return len(neighbors)
    return neighbors.index(nxt)


def teacher_path(graph: NavGraph, start: int, goal: int) -> tuple[int, ...]:
    """Node sequence obtained by following the teacher from start until it stops."""
    path = [start]
    current = start
    while True:
        nxt = teacher_next_node(graph, current, goal)
        if nxt is None:
            return tuple(path)
        if len(path) > graph.num_nodes:
            raise TeacherError(f"Teacher failed to converge from {start} to {goal}")
        path.append(nxt)
        current = nxt
