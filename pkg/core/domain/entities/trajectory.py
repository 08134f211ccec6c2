"""Trajectory: the node sequence an agent visited."""

from dataclasses import dataclass

import numpy as np

from .nav_graph import NavGraph


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Visited node sequence, including the start node."""

    nodes: tuple[int, ...]
    graph: NavGraph

    def __post_init__(self) -> None:
        nodes = tuple(int(n) for n in self.nodes)
        if not nodes:
            raise ValueError("Trajectory must contain at least the start node")
        for u, v in zip(nodes, nodes[1:]):
            if not self.graph.has_edge(u, v):
                raise ValueError(f"Trajectory step {u} -> {v} is not a graph edge")
        object.__setattr__(self, "nodes", nodes)

    @property
    def final_node(self) -> int:
        return self.nodes[-1]

    @property
    def positions(self) -> np.ndarray:
        return self.graph.positions[list(self.nodes)]
