"""Application commands."""

from .run_commands import RecordRunCommand

__all__ = ["RecordRunCommand"]
