"""
Logging infrastructure.

All package loggers live under the 'soat' namespace and share one stream
handler, so the CLI verbosity flag controls every module at once.
"""
import logging

ROOT_LOGGER = "soat"
LOG_FORMAT = "%(asctime)s | %(levelname)s | %(name)s | %(message)s"


def _root() -> logging.Logger:
    root = logging.getLogger(ROOT_LOGGER)
    if not root.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        root.addHandler(handler)
        root.setLevel(logging.INFO)
        root.propagate = False
    return root


def get_logger(name: str) -> logging.Logger:
    """
    Get logger instance.

    Args:
        name: Logger name (usually module name)

    Returns:
        Logger under the 'soat' namespace
    """
    _root()
    if name == ROOT_LOGGER or name.startswith(ROOT_LOGGER + "."):
        return logging.getLogger(name)
    return logging.getLogger(f"{ROOT_LOGGER}.{name}")


def configure_logging(verbosity: str = "info") -> None:
    """Set the level of every package logger."""
    level = logging.getLevelName(verbosity.upper())
    if not isinstance(level, int):
        raise ValueError(f"Unknown verbosity '{verbosity}'")
    _root().setLevel(level)
