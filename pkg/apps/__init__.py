"""Applications package."""
