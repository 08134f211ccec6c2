"""Tests for orchestration package."""
