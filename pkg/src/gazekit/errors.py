"""Exception hierarchy shared across the pipeline.

The CLI maps these to exit codes: ConfigError -> 2, DataError -> 3,
NumericError -> 4 (see cli.py).
"""


class GazekitError(Exception):
    """Base class for all gazekit errors."""


class ConfigError(GazekitError):
    """Invalid configuration: bad grid shape, overlapping intervals, ..."""


class DataError(GazekitError):
    """Malformed or inconsistent input data."""


class SchemaError(DataError):
    """Input file is missing mandatory columns."""


class StreamError(DataError):
    """Sample stream violates its ordering guarantees."""


class StoreError(GazekitError):
    """Persistence failure: hash mismatch, schema version skew."""


class NotFoundError(StoreError):
    """Requested store record does not exist."""


class NumericError(GazekitError):
    """Numeric routine failed or was called outside its domain."""
