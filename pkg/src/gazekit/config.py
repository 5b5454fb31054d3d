"""Pipeline configuration.

One JSON file holds every tunable default; CLI flags override individual
values. Unknown keys are rejected so typos do not silently fall back to
defaults. All keys are documented in the README.
"""
from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .errors import ConfigError

# Logical field -> header name in the eye-tracker export.
DEFAULT_COLUMNS = {
    "participant_id": "Participant ID",
    "recording_date": "Recording date",
    "recording_start": "Recording start time",
    "t_rec": "Recording timestamp",
    "gaze_x": "Gaze point X",
    "gaze_y": "Gaze point Y",
    "movement_type": "Eye movement type",
    "event_duration": "Gaze Event duration",
    "event_index": "Eye movement type index",
}


@dataclass
class IngestConfig:
    # Fraction of EyesNotFound samples above which a learner is excluded
    # (strictly greater-than; the boundary itself passes).
    enf_exclusion_threshold: float = 0.30
    column_map: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_COLUMNS))


@dataclass
class TimelineConfig:
    # Metadata clock minus recorder clock, applied to every t_rec.
    clock_offset_ms: int = 0


@dataclass
class FeaturesConfig:
    window_ms: int = 30_000
    min_saccades: int = 3
    # Learner groups admitted into the predictive dataset.
    prediction_groups: tuple[str, ...] = ("G2", "G3")


@dataclass
class StatsConfig:
    alpha: float = 0.05


@dataclass
class HeatmapConfig:
    screen_w: float = 1920.0
    screen_h: float = 1080.0
    grid_w: int = 96
    grid_h: int = 54
    sigma_cells: float = 2.0
    weight_mode: str = "duration"  # "duration" | "count"


@dataclass
class ForestConfig:
    n_trees: int = 100
    max_features: int = 4  # ceil(sqrt(16))
    min_leaf: int = 2


@dataclass
class MlpConfig:
    epochs: int = 200
    batch_size: int = 32
    learning_rate: float = 0.001


@dataclass
class DatasetConfig:
    balance: bool = True
    class_cap: int | None = None


@dataclass
class EvalConfig:
    train_fraction: float = 0.75
    split_by: str = "sample"  # "sample" | "learner"
    loocv_unit: str = "sample"  # "sample" | "learner"


@dataclass
class Config:
    seed: int = 7
    ingest: IngestConfig = field(default_factory=IngestConfig)
    timeline: TimelineConfig = field(default_factory=TimelineConfig)
    features: FeaturesConfig = field(default_factory=FeaturesConfig)
    stats: StatsConfig = field(default_factory=StatsConfig)
    heatmap: HeatmapConfig = field(default_factory=HeatmapConfig)
    forest: ForestConfig = field(default_factory=ForestConfig)
    mlp: MlpConfig = field(default_factory=MlpConfig)
    dataset: DatasetConfig = field(default_factory=DatasetConfig)
    evaluation: EvalConfig = field(default_factory=EvalConfig)


def _build(cls: type, data: dict[str, Any], where: str) -> Any:
    fields = {f.name: f for f in dataclasses.fields(cls)}
    kwargs: dict[str, Any] = {}
    for key, value in data.items():
        if key not in fields:
            raise ConfigError(f"unknown config key {where}{key!r}")
        ftype = fields[key].type
        if dataclasses.is_dataclass(_SECTION_TYPES.get(key)) and isinstance(value, dict):
            kwargs[key] = _build(_SECTION_TYPES[key], value, where=f"{key}.")
        elif isinstance(value, list) and "tuple" in str(ftype):
            kwargs[key] = tuple(value)
        else:
            kwargs[key] = value
    try:
        return cls(**kwargs)
    except TypeError as exc:
        raise ConfigError(f"bad config section {where or 'top level'}: {exc}") from exc


_SECTION_TYPES = {
    "ingest": IngestConfig,
    "timeline": TimelineConfig,
    "features": FeaturesConfig,
    "stats": StatsConfig,
    "heatmap": HeatmapConfig,
    "forest": ForestConfig,
    "mlp": MlpConfig,
    "dataset": DatasetConfig,
    "evaluation": EvalConfig,
}


def config_from_dict(data: dict[str, Any]) -> Config:
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    return _build(Config, data, where="")


def load_config(path: str | Path | None) -> Config:
    """Load the pipeline config; ``None`` yields all defaults."""
    if path is None:
        return Config()
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {p}")
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file is not valid JSON: {exc}") from exc
    return config_from_dict(data)
