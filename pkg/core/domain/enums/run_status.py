"""
Run Status Enum.

Status values for run tracking.
"""
from enum import Enum


class RunStatus(str, Enum):
    """Run status values."""

    SUCCESS = "success"
    FAILED = "failed"
    PENDING = "pending"
    RUNNING = "running"
