"""
Domain exceptions.

Every error raised by the package derives from SoatError. The exit_code
attribute is what the CLI returns when the error escapes a command.
"""


class SoatError(Exception):
    """Base class for all package errors."""

    exit_code: int = 1


class ConfigError(SoatError, ValueError):
    """Invalid, unknown or inconsistent configuration."""

    exit_code = 2


class DimensionError(ConfigError):
    """Shape mismatch between tensors or between a tensor and a layer."""


class PatternLayoutMismatchError(ConfigError):
    """A mask pattern was requested for a token layout it cannot describe."""


class DataError(SoatError, ValueError):
    """Problems with generated or stored data."""

    exit_code = 3


class GenerationError(DataError):
    """World generation parameters are infeasible."""


class SamplingError(DataError):
    """No episode satisfies the sampling constraints."""


class TeacherError(DataError):
    """The shortest-path teacher cannot reach the goal."""


class DatasetFormatError(DataError):
    """A dataset, manifest or report file is malformed or has an unknown version."""


class CheckpointError(DataError):
    """A checkpoint cannot be read, written, or does not match the model."""


class NumericError(SoatError, ArithmeticError):
    """Non-finite values appeared in a forward or backward pass."""

    exit_code = 4


class DegenerateMaskError(NumericError, ValueError):
    """A query row of an attention mask permits no key."""


class DegenerateBatchError(NumericError, ValueError):
    """A contrastive batch is too small to contain distractors."""


class StaleCacheError(SoatError, RuntimeError):
    """Cached instruction keys/values were built with older parameters."""


class VerificationError(SoatError):
    """One or more verification checks failed."""

    exit_code = 5
