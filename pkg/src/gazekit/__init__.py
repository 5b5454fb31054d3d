"""gazekit: gaze analytics engine.

Ingests eye-tracker event logs and session metadata, synchronizes and
tags them with learning activities, computes fixation/saccade statistics,
attention heatmaps and one-way ANOVAs across learner populations, and
classifies reading vs. video watching from saccade-velocity features.
"""

__version__ = "0.1.0"

from .config import Config, load_config
from .errors import (
    ConfigError,
    DataError,
    GazekitError,
    NotFoundError,
    NumericError,
    SchemaError,
    StoreError,
    StreamError,
)

__all__ = [
    "Config",
    "ConfigError",
    "DataError",
    "GazekitError",
    "NotFoundError",
    "NumericError",
    "SchemaError",
    "StoreError",
    "StreamError",
    "__version__",
    "load_config",
]
