"""
Domain layer.

Pure types and pure functions for navigation episodes, token layouts,
attention masks and metrics. No persistence, settings or CLI imports.
"""
