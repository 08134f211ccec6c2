"""Domain entities."""

from .episode import Episode
from .nav_graph import NavGraph
from .trajectory import Trajectory

__all__ = ["Episode", "NavGraph", "Trajectory"]
