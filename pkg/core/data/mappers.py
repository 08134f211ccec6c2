"""Static mappers for domain entities <-> persistence records."""

from typing import Iterable

import numpy as np

from core.domain.entities import Episode, NavGraph

from .records import (
    DATASET_FORMAT_VERSION,
    EpisodeRecord,
    GraphRecord,
    NodeRecord,
    ObjectRecord,
    WorldLineRecord,
)


class GraphMapper:
    """Static mapper for NavGraph <-> GraphRecord transformation."""

    @staticmethod
    def to_domain(world_id: str, record: GraphRecord) -> NavGraph:
        """Convert a graph record to a NavGraph.

        Args:
            world_id: identifier of the world
            record: GraphRecord with nodes listed by ascending id

        Returns:
            NavGraph domain entity

        Raises:
            ValueError: if node ids are not 0..n-1 in order, or the graph is invalid
        """
        ids = [node.id for node in record.nodes]
        if ids != list(range(len(ids))):
            raise ValueError(f"World {world_id}: node ids must be 0..{len(ids) - 1} in order")
        return NavGraph(
            world_id=world_id,
            positions=np.array([[n.x, n.y, n.z] for n in record.nodes], dtype=np.float64),
            edges=tuple((int(u), int(v)) for u, v in record.edges),
            scene_classes=tuple(n.scene_class for n in record.nodes),
            objects=tuple(tuple((o.object_class, o.size) for o in n.objects) for n in record.nodes),
        )

    @staticmethod
    def to_persistence(graph: NavGraph) -> GraphRecord:
        """Convert a NavGraph to its record."""
        nodes = []
        for node in range(graph.num_nodes):
            x, y, z = (float(c) for c in graph.positions[node])
            nodes.append(
                NodeRecord(
                    id=node,
                    x=x,
                    y=y,
                    z=z,
                    scene_class=graph.scene_classes[node],
                    objects=[ObjectRecord(object_class=c, size=s) for c, s in graph.objects[node]],
                )
            )
        return GraphRecord(nodes=nodes, edges=[(u, v) for u, v in graph.edges])


class EpisodeMapper:
    """Static mapper for Episode <-> EpisodeRecord transformation."""

    @staticmethod
    def to_domain(world_id: str, record: EpisodeRecord) -> Episode:
        return Episode(
            episode_id=record.episode_id,
            world_id=world_id,
            start=record.start,
            goal=record.goal,
            path=tuple(record.path),
            instruction=tuple(record.instruction),
            object_ref_count=record.object_ref_count,
            noise_seed=record.noise_seed,
        )

    @staticmethod
    def to_persistence(episode: Episode) -> EpisodeRecord:
        return EpisodeRecord(
            episode_id=episode.episode_id,
            start=episode.start,
            goal=episode.goal,
            path=list(episode.path),
            instruction=list(episode.instruction),
            object_ref_count=episode.object_ref_count,
            noise_seed=episode.noise_seed,
        )


class WorldLineMapper:
    """Static mapper for (NavGraph, episodes) <-> one split-file line."""

    @staticmethod
    def to_persistence(graph: NavGraph, episodes: Iterable[Episode]) -> WorldLineRecord:
        return WorldLineRecord(
            format_version=DATASET_FORMAT_VERSION,
            world_id=graph.world_id,
            graph=GraphMapper.to_persistence(graph),
            episodes=[EpisodeMapper.to_persistence(e) for e in episodes],
        )

    @staticmethod
    def to_domain(record: WorldLineRecord) -> tuple[NavGraph, list[Episode]]:
        graph = GraphMapper.to_domain(record.world_id, record.graph)
        return graph, [EpisodeMapper.to_domain(record.world_id, e) for e in record.episodes]
