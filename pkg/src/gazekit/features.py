"""Event deduplication and feature extraction.

The tracker emits one row per frame but labels whole events (a fixation or
saccade spans many frames, all sharing the same movement type and index).
This module collapses frames into events, derives per-learner activity
profiles from them, and turns saccade runs into the 16-feature vectors
used by the prediction models.

Moment conventions, fixed so oracle tests are exact: population (biased)
moments; skew g1 = m3/m2^1.5; Fisher excess kurtosis m4/m2^2 - 3; zero
variance yields skew = kurtosis = 0 plus a degeneracy flag. All sums use
math.fsum, so permuting inputs cannot change any output bit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np

from .errors import DataError
from .ingest import (
    ACTIVITY_READING,
    ACTIVITY_VIDEO,
    FIXATION,
    SACCADE,
    LearnerMeta,
)
from .timeline import UNTAGGED, Segment, TaggedSample

WHOLE_SESSION = "WholeSession"

LABEL_READING = "Reading"
LABEL_VIDEO = "VideoWatching"
LABELS = (LABEL_READING, LABEL_VIDEO)  # class ids 0, 1

_ACTIVITY_TO_LABEL = {ACTIVITY_READING: LABEL_READING, ACTIVITY_VIDEO: LABEL_VIDEO}

SEX_CODES = {"F": 0, "M": 1}  # metadata enum order; Unspecified never enters datasets

# Export column order; the 16 features followed by the label mirror the
# prediction-metric table, metadata columns trail for bookkeeping.
FEATURE_COLUMNS = (
    "sex_code",
    "saccade_count",
    "v_mean",
    "v_x_mean",
    "v_y_mean",
    "v_max",
    "v_min",
    "v_std",
    "v_x_std",
    "v_y_std",
    "v_kurt",
    "v_x_kurt",
    "v_y_kurt",
    "v_skew",
    "v_x_skew",
    "v_y_skew",
)
DATASET_COLUMNS = FEATURE_COLUMNS[:1] + ("label",) + FEATURE_COLUMNS[1:] + (
    "participant_id",
    "window_start",
    "degenerate",
)


@dataclass(frozen=True)
class GazeEvent:
    """One deduplicated fixation or saccade."""

    movement_type: str
    event_index: int
    t_begin: int  # t_abs of first frame
    t_end: int  # t_abs of last frame
    duration: int  # ms, from the tracker's event duration field
    start_point: tuple[float, float]
    end_point: tuple[float, float]
    centroid: tuple[float, float]
    activity_id: str


@dataclass
class EventReport:
    n_events: int = 0
    cross_activity: list[tuple[str, int]] = field(default_factory=list)
    dropped_zero_duration: list[tuple[str, int]] = field(default_factory=list)


@dataclass(frozen=True)
class ActivityProfile:
    """The four attention parameters for one learner and one activity."""

    participant_id: str
    activity_id: str  # activity name or WHOLE_SESSION
    saccade_count: int
    fixation_count: int
    avg_saccade_rate: float  # saccades / minute
    avg_fixation_rate: float
    avg_saccade_time: float  # ms
    avg_fixation_time: float
    duration_ms: int
    no_saccades: bool = False
    no_fixations: bool = False

    PARAMETERS = (
        "avg_saccade_rate",
        "avg_fixation_rate",
        "avg_saccade_time",
        "avg_fixation_time",
    )


@dataclass(frozen=True)
class FeatureVector:
    """The 16 predictive features of one window, plus its label."""

    sex_code: int
    label: str
    saccade_count: int
    v_mean: float
    v_x_mean: float
    v_y_mean: float
    v_max: float
    v_min: float
    v_std: float
    v_x_std: float
    v_y_std: float
    v_kurt: float
    v_x_kurt: float
    v_y_kurt: float
    v_skew: float
    v_x_skew: float
    v_y_skew: float
    degenerate: bool = False  # zero-variance skew/kurtosis convention applied
    participant_id: str = ""
    window_start: int = 0

    def to_array(self) -> np.ndarray:
        return np.array([float(getattr(self, c)) for c in FEATURE_COLUMNS], dtype=float)


def collect_events(tagged: Sequence[TaggedSample]) -> tuple[list[GazeEvent], EventReport]:
    """Group frames into events keyed by (movement type, event index).

    Event activity is the tag of its first frame; events whose frames span
    several activities are flagged. Unclassified and EyesNotFound frames are
    ignored, as are events with non-positive durations (velocity math needs
    duration > 0).
    """
    order: list[tuple[str, int]] = []
    frames: dict[tuple[str, int], list[TaggedSample]] = {}
    for ts in tagged:
        s = ts.sample
        if s.movement_type not in (FIXATION, SACCADE):
            continue
        key = (s.movement_type, s.event_index)
        if key not in frames:
            frames[key] = []
            order.append(key)
        frames[key].append(ts)

    events: list[GazeEvent] = []
    report = EventReport()
    for key in order:
        run = frames[key]
        first, last = run[0], run[-1]
        duration = first.sample.event_duration
        if duration <= 0:
            report.dropped_zero_duration.append(key)
            continue
        tags = {ts.activity_id for ts in run}
        if len(tags) > 1:
            report.cross_activity.append(key)
        cx = math.fsum(ts.sample.gaze_x for ts in run) / len(run)
        cy = math.fsum(ts.sample.gaze_y for ts in run) / len(run)
        events.append(
            GazeEvent(
                movement_type=key[0],
                event_index=key[1],
                t_begin=first.t_abs,
                t_end=last.t_abs,
                duration=duration,
                start_point=(first.sample.gaze_x, first.sample.gaze_y),
                end_point=(last.sample.gaze_x, last.sample.gaze_y),
                centroid=(cx, cy),
                activity_id=first.activity_id,
            )
        )
    report.n_events = len(events)
    return events, report


def saccade_velocity(event: GazeEvent) -> tuple[float, float, float]:
    """Net-displacement velocity of a saccade: (magnitude, signed x, signed y),
    all in px/ms."""
    if event.movement_type != SACCADE:
        raise DataError(f"saccade_velocity called on a {event.movement_type} event")
    if event.duration <= 0:
        raise DataError("saccade event with non-positive duration")
    vx = (event.end_point[0] - event.start_point[0]) / event.duration
    vy = (event.end_point[1] - event.start_point[1]) / event.duration
    return math.hypot(vx, vy), vx, vy


def _moments(values: Sequence[float]) -> tuple[float, float, float, float, bool]:
    """mean, population std, skew g1, Fisher excess kurtosis, degenerate?"""
    n = len(values)
    mean = math.fsum(values) / n
    m2 = math.fsum((v - mean) ** 2 for v in values) / n
    if m2 <= 0.0:
        return mean, 0.0, 0.0, 0.0, True
    m3 = math.fsum((v - mean) ** 3 for v in values) / n
    m4 = math.fsum((v - mean) ** 4 for v in values) / n
    return mean, math.sqrt(m2), m3 / m2**1.5, m4 / m2**2 - 3.0, False


def window_features(
    events: Sequence[GazeEvent],
    meta: LearnerMeta,
    label: str,
    *,
    min_saccades: int = 3,
    window_start: int = 0,
) -> FeatureVector | None:
    """Moment statistics over the window's per-saccade velocities.

    Returns None when the window holds fewer than ``min_saccades`` saccades
    (the caller counts discards). Magnitude stats use |v|; per-axis stats
    use the signed components.
    """
    saccades = [e for e in events if e.movement_type == SACCADE]
    if len(saccades) < min_saccades:
        return None
    if meta.sex not in SEX_CODES:
        raise DataError(f"cannot encode sex {meta.sex!r} for prediction")

    vel = [saccade_velocity(e) for e in saccades]
    v = [t[0] for t in vel]
    vx = [t[1] for t in vel]
    vy = [t[2] for t in vel]

    v_mean, v_std, v_skew, v_kurt, deg_v = _moments(v)
    vx_mean, vx_std, vx_skew, vx_kurt, deg_x = _moments(vx)
    vy_mean, vy_std, vy_skew, vy_kurt, deg_y = _moments(vy)

    return FeatureVector(
        sex_code=SEX_CODES[meta.sex],
        label=label,
        saccade_count=len(saccades),
        v_mean=v_mean,
        v_x_mean=vx_mean,
        v_y_mean=vy_mean,
        v_max=max(v),
        v_min=min(v),
        v_std=v_std,
        v_x_std=vx_std,
        v_y_std=vy_std,
        v_kurt=v_kurt,
        v_x_kurt=vx_kurt,
        v_y_kurt=vy_kurt,
        v_skew=v_skew,
        v_x_skew=vx_skew,
        v_y_skew=vy_skew,
        degenerate=deg_v or deg_x or deg_y,
        participant_id=meta.participant_id,
        window_start=window_start,
    )


def _profile_for(
    pid: str,
    activity_id: str,
    events: Sequence[GazeEvent],
    duration_ms: int,
) -> ActivityProfile:
    saccades = [e for e in events if e.movement_type == SACCADE]
    fixations = [e for e in events if e.movement_type == FIXATION]
    minutes = duration_ms / 60_000.0
    sacc_time = (
        math.fsum(e.duration for e in saccades) / len(saccades) if saccades else 0.0
    )
    fix_time = (
        math.fsum(e.duration for e in fixations) / len(fixations) if fixations else 0.0
    )
    return ActivityProfile(
        participant_id=pid,
        activity_id=activity_id,
        saccade_count=len(saccades),
        fixation_count=len(fixations),
        avg_saccade_rate=len(saccades) / minutes,
        avg_fixation_rate=len(fixations) / minutes,
        avg_saccade_time=sacc_time,
        avg_fixation_time=fix_time,
        duration_ms=duration_ms,
        no_saccades=not saccades,
        no_fixations=not fixations,
    )


def build_profiles(
    participant_id: str,
    events: Sequence[GazeEvent],
    intervals: Sequence,  # ActivityInterval
) -> list[ActivityProfile]:
    """One profile per activity plus the whole-session aggregate.

    Activity duration is the summed interval length; whole-session duration
    is the union of all intervals, and its events are every tagged event
    (untagged events are excluded throughout).
    """
    durations: dict[str, int] = {}
    for iv in intervals:
        durations[iv.activity_id] = durations.get(iv.activity_id, 0) + (iv.t_end - iv.t_start)
    if not durations:
        raise DataError(f"no activity intervals for participant {participant_id!r}")

    tagged_events = [e for e in events if e.activity_id != UNTAGGED]
    profiles = []
    for activity in sorted(durations):
        dur = durations[activity]
        if dur <= 0:
            raise DataError(f"activity {activity!r} has non-positive duration")
        ev = [e for e in tagged_events if e.activity_id == activity]
        profiles.append(_profile_for(participant_id, activity, ev, dur))
    profiles.append(
        _profile_for(participant_id, WHOLE_SESSION, tagged_events, sum(durations.values()))
    )
    return profiles


@dataclass
class DatasetReport:
    windows_total: int = 0
    windows_discarded: int = 0  # fewer saccades than min_saccades
    learners_skipped: list[str] = field(default_factory=list)
    per_class_before: dict[str, int] = field(default_factory=dict)
    per_class_after: dict[str, int] = field(default_factory=dict)


@dataclass
class LabeledDataset:
    vectors: list[FeatureVector]

    def to_arrays(self) -> tuple[np.ndarray, np.ndarray, list[str]]:
        """(X, y, learner ids) with y as class ids per LABELS order."""
        X = np.array([v.to_array() for v in self.vectors], dtype=float)
        y = np.array([LABELS.index(v.label) for v in self.vectors], dtype=int)
        return X, y, [v.participant_id for v in self.vectors]

    def class_counts(self) -> dict[str, int]:
        counts = {label: 0 for label in LABELS}
        for v in self.vectors:
            counts[v.label] += 1
        return counts


def cut_windows(
    segments: Sequence[Segment],
    events: Sequence[GazeEvent],
    window_ms: int,
) -> list[tuple[str, int, list[GazeEvent]]]:
    """Cut Reading/Video segments into consecutive fixed-length windows.

    The trailing partial window of each segment is dropped. Events land in
    the window containing their t_begin. Returns (label, window_start,
    events) triples.
    """
    if window_ms <= 0:
        raise DataError(f"window_ms must be positive, got {window_ms}")
    out: list[tuple[str, int, list[GazeEvent]]] = []
    for seg in segments:
        label = _ACTIVITY_TO_LABEL.get(seg.activity_id)
        if label is None:
            continue
        n_windows = (seg.t_end - seg.t_start) // window_ms
        if n_windows <= 0:
            continue
        buckets: list[list[GazeEvent]] = [[] for _ in range(n_windows)]
        for e in events:
            if e.activity_id != seg.activity_id:
                continue
            if not seg.t_start <= e.t_begin <= seg.t_end:
                continue
            k = (e.t_begin - seg.t_start) // window_ms
            if k < n_windows:
                buckets[int(k)].append(e)
        for k, bucket in enumerate(buckets):
            out.append((label, seg.t_start + k * window_ms, bucket))
    return out


def make_dataset(
    learners: Iterable[tuple[LearnerMeta, Sequence[Segment], Sequence[GazeEvent]]],
    *,
    window_ms: int = 30_000,
    balance: bool = True,
    seed: int = 0,
    min_saccades: int = 3,
    groups: Sequence[str] = ("G2", "G3"),
    class_cap: int | None = None,
) -> tuple[LabeledDataset, DatasetReport]:
    """Build the labeled Reading/VideoWatching window dataset.

    Only learners from ``groups`` with a codable sex enter. ``class_cap``
    truncates each class to at most that many windows (seeded subsample);
    ``balance`` then undersamples the majority class down to the minority
    count. Output order is stable: (participant_id, window start).
    """
    report = DatasetReport()
    vectors: list[FeatureVector] = []
    group_set = set(groups)
    for meta, segments, events in learners:
        if meta.group not in group_set or meta.sex not in SEX_CODES:
            report.learners_skipped.append(meta.participant_id)
            continue
        for label, w_start, bucket in cut_windows(segments, events, window_ms):
            report.windows_total += 1
            fv = window_features(
                bucket, meta, label, min_saccades=min_saccades, window_start=w_start
            )
            if fv is None:
                report.windows_discarded += 1
            else:
                vectors.append(fv)

    vectors.sort(key=lambda v: (v.participant_id, v.window_start, v.label))
    report.per_class_before = {
        label: sum(1 for v in vectors if v.label == label) for label in LABELS
    }
    if any(n == 0 for n in report.per_class_before.values()):
        raise DataError(f"empty class in dataset: {report.per_class_before}")

    rng = np.random.default_rng(seed)
    # Seeded subsampling, applied per class in LABELS order; survivors keep
    # their stable ordering.
    keep: dict[str, set[int]] = {}
    by_class = {
        label: [i for i, v in enumerate(vectors) if v.label == label] for label in LABELS
    }
    targets = {label: len(idx) for label, idx in by_class.items()}
    if class_cap is not None:
        if class_cap < 1:
            raise DataError(f"class_cap must be >= 1, got {class_cap}")
        targets = {label: min(n, class_cap) for label, n in targets.items()}
    if balance:
        floor = min(targets.values())
        targets = {label: floor for label in targets}
    for label in LABELS:
        idx = by_class[label]
        want = targets[label]
        if want < len(idx):
            chosen = rng.choice(len(idx), size=want, replace=False)
            keep[label] = {idx[i] for i in chosen}
        else:
            keep[label] = set(idx)
    kept = [v for i, v in enumerate(vectors) if i in keep[v.label]]
    report.per_class_after = {
        label: sum(1 for v in kept if v.label == label) for label in LABELS
    }
    return LabeledDataset(kept), report


def write_dataset(dataset: LabeledDataset, sink: str | Path | IO[str]) -> None:
    """Write the dataset as tab-separated text, one row per vector."""
    own = isinstance(sink, (str, Path))
    out: IO[str] = open(sink, "w", encoding="utf-8", newline="") if own else sink  # type: ignore[assignment]
    try:
        out.write("\t".join(DATASET_COLUMNS) + "\n")
        for v in dataset.vectors:
            cells = []
            for col in DATASET_COLUMNS:
                val = getattr(v, col)
                if isinstance(val, bool):
                    cells.append("1" if val else "0")
                elif isinstance(val, float):
                    cells.append(repr(val))
                else:
                    cells.append(str(val))
            out.write("\t".join(cells) + "\n")
    finally:
        if own:
            out.close()


def read_dataset(source: str | Path | IO[str]) -> LabeledDataset:
    own = isinstance(source, (str, Path))
    stream: IO[str] = open(source, "r", encoding="utf-8") if own else source  # type: ignore[assignment]
    try:
        header = stream.readline().rstrip("\r\n").split("\t")
        if tuple(header) != DATASET_COLUMNS:
            raise DataError("dataset file does not match the documented column order")
        vectors = []
        for line in stream:
            if not line.strip():
                continue
            cells = line.rstrip("\r\n").split("\t")
            row = dict(zip(DATASET_COLUMNS, cells))
            vectors.append(
                FeatureVector(
                    sex_code=int(row["sex_code"]),
                    label=row["label"],
                    saccade_count=int(row["saccade_count"]),
                    degenerate=row["degenerate"] == "1",
                    participant_id=row["participant_id"],
                    window_start=int(row["window_start"]),
                    **{
                        c: float(row[c])
                        for c in FEATURE_COLUMNS
                        if c not in ("sex_code", "saccade_count")
                    },
                )
            )
        return LabeledDataset(vectors)
    finally:
        if own:
            stream.close()


def dataset_to_record(dataset: LabeledDataset, report: DatasetReport | None = None) -> dict:
    """Store payload mirroring the delimited export, column for column."""
    rows = []
    for v in dataset.vectors:
        row = []
        for col in DATASET_COLUMNS:
            val = getattr(v, col)
            row.append(float(val) if isinstance(val, float) else val)
        rows.append(row)
    rec = {"columns": list(DATASET_COLUMNS), "rows": rows}
    if report is not None:
        rec["report"] = {
            "windows_total": report.windows_total,
            "windows_discarded": report.windows_discarded,
            "learners_skipped": report.learners_skipped,
            "per_class_before": report.per_class_before,
            "per_class_after": report.per_class_after,
        }
    return rec


def dataset_from_record(rec: dict) -> LabeledDataset:
    if tuple(rec["columns"]) != DATASET_COLUMNS:
        raise DataError("stored dataset does not match the documented column order")
    vectors = []
    for row in rec["rows"]:
        named = dict(zip(DATASET_COLUMNS, row))
        vectors.append(
            FeatureVector(
                sex_code=int(named["sex_code"]),
                label=named["label"],
                saccade_count=int(named["saccade_count"]),
                degenerate=bool(named["degenerate"]),
                participant_id=named["participant_id"],
                window_start=int(named["window_start"]),
                **{
                    c: float(named[c])
                    for c in FEATURE_COLUMNS
                    if c not in ("sex_code", "saccade_count")
                },
            )
        )
    return LabeledDataset(vectors)


def profile_record(profile: ActivityProfile, meta: LearnerMeta | None = None) -> dict:
    """Store payload for a profile; demographics ride along when known."""
    rec = {
        "participant_id": profile.participant_id,
        "activity_id": profile.activity_id,
        "saccade_count": profile.saccade_count,
        "fixation_count": profile.fixation_count,
        "avg_saccade_rate": profile.avg_saccade_rate,
        "avg_fixation_rate": profile.avg_fixation_rate,
        "avg_saccade_time": profile.avg_saccade_time,
        "avg_fixation_time": profile.avg_fixation_time,
        "duration_ms": profile.duration_ms,
        "no_saccades": profile.no_saccades,
        "no_fixations": profile.no_fixations,
    }
    if meta is not None:
        rec["sex"] = meta.sex
        rec["group"] = meta.group
        rec["html_level"] = meta.html_level
    return rec


def profile_from_record(rec: dict) -> ActivityProfile:
    return ActivityProfile(
        participant_id=rec["participant_id"],
        activity_id=rec["activity_id"],
        saccade_count=rec["saccade_count"],
        fixation_count=rec["fixation_count"],
        avg_saccade_rate=rec["avg_saccade_rate"],
        avg_fixation_rate=rec["avg_fixation_rate"],
        avg_saccade_time=rec["avg_saccade_time"],
        avg_fixation_time=rec["avg_fixation_time"],
        duration_ms=rec["duration_ms"],
        no_saccades=rec["no_saccades"],
        no_fixations=rec["no_fixations"],
    )
