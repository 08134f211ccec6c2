"""
Navigation graph aggregate.

A world: navigable locations with 3D positions (meters), undirected edges
weighted by Euclidean length, one scene class per node and a list of
(object class, size) pairs per node.
"""
from dataclasses import dataclass
from functools import cached_property
import hashlib
import math

import networkx as nx
import numpy as np


@dataclass(frozen=True, eq=False)
class NavGraph:
    """Immutable navigation graph."""

    world_id: str
    positions: np.ndarray
    edges: tuple[tuple[int, int], ...]
    scene_classes: tuple[int, ...]
    objects: tuple[tuple[tuple[int, float], ...], ...]

    def __post_init__(self) -> None:
        positions = np.array(self.positions, dtype=np.float64)
        if positions.ndim != 2 or positions.shape[1] != 3:
            raise ValueError(f"Positions must be (n, 3), got {positions.shape}")
        if not np.all(np.isfinite(positions)):
            raise ValueError(f"World {self.world_id} has non-finite node positions")
        positions.setflags(write=False)
        object.__setattr__(self, "positions", positions)

        n = positions.shape[0]
        if len(self.scene_classes) != n or len(self.objects) != n:
            raise ValueError("scene_classes and objects must have one entry per node")

        edges = tuple(sorted({(min(u, v), max(u, v)) for u, v in self.edges}))
        for u, v in edges:
            if u == v or not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"Invalid edge ({u}, {v}) in world {self.world_id}")
            if self._distance(positions, u, v) <= 0.0:
                raise ValueError(f"Edge ({u}, {v}) has zero length in world {self.world_id}")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "scene_classes", tuple(int(c) for c in self.scene_classes))
        object.__setattr__(
            self,
            "objects",
            tuple(tuple((int(c), float(s)) for c, s in node_objs) for node_objs in self.objects),
        )

        if n >= 1 and not nx.is_connected(self.graph):
            raise ValueError(f"World {self.world_id} is not connected")

    @staticmethod
    def _distance(positions: np.ndarray, u: int, v: int) -> float:
        return float(np.linalg.norm(positions[u] - positions[v]))

    @property
    def num_nodes(self) -> int:
        return self.positions.shape[0]

    @cached_property
    def graph(self) -> nx.Graph:
        """networkx view with a 'length' edge attribute."""
        g = nx.Graph()
        g.add_nodes_from(range(self.positions.shape[0]))
        for u, v in self.edges:
            g.add_edge(u, v, length=self._distance(self.positions, u, v))
        return g

    @cached_property
    def _neighbors(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(sorted(self.graph.neighbors(n))) for n in range(self.num_nodes))

    @cached_property
    def _distances_cache(self) -> dict[int, dict[int, float]]:
        return {}

    def neighbors(self, node: int) -> tuple[int, ...]:
        """Adjacent nodes in ascending id order (the candidate view order)."""
        return self._neighbors[node]

    def has_edge(self, u: int, v: int) -> bool:
        return self.graph.has_edge(u, v)

    def edge_length(self, u: int, v: int) -> float:
        return self.graph.edges[u, v]["length"]

    def position(self, node: int) -> np.ndarray:
        return self.positions[node]

    def distances_to(self, goal: int) -> dict[int, float]:
        """Geodesic distance from every reachable node to goal (Dijkstra, cached)."""
        cache = self._distances_cache
        if goal not in cache:
            cache[goal] = nx.single_source_dijkstra_path_length(self.graph, goal, weight="length")
        return cache[goal]

    def geodesic_distance(self, source: int, target: int) -> float:
        """Shortest-path length in meters; inf when unreachable."""
        return self.distances_to(target).get(source, math.inf)

    def hop_distance(self, source: int, target: int) -> int:
        return nx.shortest_path_length(self.graph, source, target)

    def content_hash(self) -> str:
        """Hash of geometry, topology and semantics (world id excluded)."""
        digest = hashlib.sha256()
        digest.update(np.ascontiguousarray(self.positions).tobytes())
        digest.update(repr(self.edges).encode())
        digest.update(repr(self.scene_classes).encode())
        digest.update(repr(self.objects).encode())
        return digest.hexdigest()
