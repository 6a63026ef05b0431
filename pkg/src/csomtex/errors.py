"""Exception types shared across the package.

Parameter misuse (bad ranges, invalid configuration values) raises plain
ValueError; the classes below mark problems with the *data* being processed,
so callers (and the CLI exit-code mapping) can tell the two apart.
"""


class Error(Exception):
    """Base class for csomtex errors."""


class DataError(Error):
    """Input data cannot be processed as requested."""


class FormatError(DataError):
    """A serialized input (PGM, CSV, model file) is malformed."""


class TruncationError(FormatError):
    """A serialized input ends before its declared size."""


class ShapeError(DataError):
    """Dimension mismatch between operands."""


class EmptyForegroundError(DataError):
    """No pixel lies above the foreground threshold, so there is nothing to crop."""


class IntegrityError(Error):
    """A model file checksum does not validate."""
