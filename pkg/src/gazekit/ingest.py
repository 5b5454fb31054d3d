"""Parsing and quality-filtering of eye-tracker exports and session metadata.

Two input files feed the pipeline:

* a delimited-text gaze export per learner (tab or comma, autodetected
  from the header line), one row per tracker frame;
* one session metadata file with a ``learner`` record and an ``interval``
  record per line (tab-separated, ``#`` comments allowed).

Both canonical forms are documented field-by-field in the README.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from functools import lru_cache
from datetime import date, time
from pathlib import Path
from typing import IO, Iterable, Sequence

from .config import DEFAULT_COLUMNS
from .errors import DataError, SchemaError, StreamError

# Movement types as they appear in the domain model. Exports may spell
# "Eyes Not Found" with spaces; both forms are accepted on input.
FIXATION = "Fixation"
SACCADE = "Saccade"
UNCLASSIFIED = "Unclassified"
EYES_NOT_FOUND = "EyesNotFound"
MOVEMENT_TYPES = (FIXATION, SACCADE, UNCLASSIFIED, EYES_NOT_FOUND)

_MOVEMENT_ALIASES = {t: t for t in MOVEMENT_TYPES}
_MOVEMENT_ALIASES["Eyes Not Found"] = EYES_NOT_FOUND

SEXES = ("F", "M", "Unspecified")
GROUPS = ("G1", "G2", "G3")

ACTIVITY_VIDEO = "Video"
ACTIVITY_READING = "Reading"
ACTIVITY_ASSIGNMENT = "Assignment"


@dataclass(frozen=True, slots=True)
class GazeSample:
    """One eye-tracker frame."""

    participant_id: str
    recording_date: date
    recording_start: time
    t_rec: int  # ms since recording start
    movement_type: str
    event_duration: int  # ms
    event_index: int  # auto-increment per movement type, from 1
    gaze_x: float | None = None  # pixels, origin top-left
    gaze_y: float | None = None

    def has_gaze(self) -> bool:
        return self.gaze_x is not None and self.gaze_y is not None


@dataclass(frozen=True)
class LearnerMeta:
    participant_id: str
    sex: str
    group: str
    html_level: str
    academic_background: str
    learning_score: float  # posttest - pretest


@dataclass(frozen=True)
class ActivityInterval:
    """Half-open activity window [t_start, t_end) on the session clock."""

    participant_id: str
    activity_id: str
    t_start: int
    t_end: int


@dataclass(frozen=True)
class QualityReport:
    participant_id: str
    total_samples: int
    eyes_not_found_fraction: float
    excluded: bool
    reason: str


@dataclass
class GazeParseReport:
    """Per-file accounting of what the parser did."""

    n_rows: int = 0
    n_parsed: int = 0
    issues: list[tuple[int, str]] = field(default_factory=list)  # (line no, reason)
    fatal: str | None = None

    @property
    def n_malformed(self) -> int:
        return len(self.issues)


def _open_text(source: str | Path | bytes | IO) -> IO[str]:
    if isinstance(source, (str, Path)):
        try:
            return open(source, "r", encoding="utf-8", newline="")
        except OSError as exc:
            raise DataError(f"cannot open {source}: {exc}") from exc
    if isinstance(source, bytes):
        return io.StringIO(source.decode("utf-8", errors="replace"))
    if isinstance(source, io.TextIOBase):
        return source
    # binary file-like
    return io.TextIOWrapper(source, encoding="utf-8", errors="replace")


def _detect_delimiter(header_line: str) -> str:
    return "\t" if "\t" in header_line else ","


# Every row of an export repeats the same recording date/start strings,
# so both parsers are memoized.
@lru_cache(maxsize=256)
def _parse_time_ms(text: str) -> time:
    # Canonical form HH:MM:SS:mmm; HH:MM:SS.mmm and HH:MM:SS also accepted.
    parts = text.strip().replace(".", ":").split(":")
    if len(parts) == 3:
        parts.append("0")
    if len(parts) != 4:
        raise ValueError(f"bad time of day: {text!r}")
    h, m, s, ms = (int(p) for p in parts)
    return time(h, m, s, ms * 1000)


@lru_cache(maxsize=256)
def _parse_date(text: str) -> date:
    return date.fromisoformat(text)


def _format_time_ms(t: time) -> str:
    return f"{t.hour:02d}:{t.minute:02d}:{t.second:02d}:{t.microsecond // 1000:03d}"


def parse_gaze_export(
    source: str | Path | bytes | IO,
    column_map: dict[str, str] | None = None,
    *,
    strict: bool = True,
) -> tuple[list[GazeSample], GazeParseReport]:
    """Parse one learner's delimited gaze export.

    Well-formed rows become GazeSamples in file order; malformed rows are
    skipped and reported with their line numbers. A missing mandatory
    column or a t_rec that runs backwards is fatal: with ``strict`` it
    raises SchemaError/StreamError, otherwise it is recorded in
    ``report.fatal`` and parsing stops at the offending line.
    """
    columns = dict(DEFAULT_COLUMNS)
    if column_map:
        columns.update(column_map)
    report = GazeParseReport()
    samples: list[GazeSample] = []

    stream = _open_text(source)
    try:
        header_line = stream.readline()
        if not header_line:
            report.fatal = "empty input: no header row"
            if strict:
                raise SchemaError(report.fatal)
            return samples, report
        delim = _detect_delimiter(header_line)
        header = [h.strip() for h in header_line.rstrip("\r\n").split(delim)]
        positions: dict[str, int] = {}
        missing = []
        for logical, name in columns.items():
            try:
                positions[logical] = header.index(name)
            except ValueError:
                missing.append(name)
        if missing:
            report.fatal = f"missing mandatory column(s): {', '.join(missing)}"
            if strict:
                raise SchemaError(report.fatal)
            return samples, report

        pos = tuple(
            positions[k]
            for k in (
                "participant_id",
                "recording_date",
                "recording_start",
                "t_rec",
                "gaze_x",
                "gaze_y",
                "movement_type",
                "event_duration",
                "event_index",
            )
        )
        prev_t = None
        for line_no, line in enumerate(stream, start=2):
            raw = line.rstrip("\r\n")
            if not raw.strip():
                continue
            report.n_rows += 1
            fields_ = raw.split(delim)
            try:
                sample = _parse_row(fields_, pos)
            except (ValueError, IndexError) as exc:
                report.issues.append((line_no, str(exc)))
                continue
            if prev_t is not None and sample.t_rec < prev_t:
                report.fatal = (
                    f"non-monotonic Recording timestamp at line {line_no}: "
                    f"{sample.t_rec} after {prev_t}"
                )
                if strict:
                    raise StreamError(report.fatal)
                return samples, report
            prev_t = sample.t_rec
            samples.append(sample)
            report.n_parsed += 1
    finally:
        if isinstance(source, (str, Path)):
            stream.close()
    return samples, report


def _parse_row(f: Sequence[str], pos: tuple[int, ...]) -> GazeSample:
    # Hot path: one call per export row. int()/float() tolerate surrounding
    # whitespace, so stripping happens only where it changes meaning.
    movement_raw = f[pos[6]]
    movement = _MOVEMENT_ALIASES.get(movement_raw) or _MOVEMENT_ALIASES.get(movement_raw.strip())
    if movement is None:
        raise ValueError(f"unknown eye movement type {movement_raw.strip()!r}")

    t_rec = int(f[pos[3]])
    if t_rec < 0:
        raise ValueError(f"negative recording timestamp {t_rec}")
    event_index = int(f[pos[8]])
    if event_index < 1:
        raise ValueError(f"event index must be >= 1, got {event_index}")
    event_duration = int(f[pos[7]])
    if event_duration < 0:
        raise ValueError(f"negative event duration {event_duration}")

    gx_raw, gy_raw = f[pos[4]].strip(), f[pos[5]].strip()
    gaze_x = float(gx_raw) if gx_raw else None
    gaze_y = float(gy_raw) if gy_raw else None
    if (gaze_x is None or gaze_y is None) and movement in (FIXATION, SACCADE):
        raise ValueError(f"{movement} row without gaze point")

    return GazeSample(
        participant_id=f[pos[0]].strip(),
        recording_date=_parse_date(f[pos[1]].strip()),
        recording_start=_parse_time_ms(f[pos[2]].strip()),
        t_rec=t_rec,
        movement_type=movement,
        event_duration=event_duration,
        event_index=event_index,
        gaze_x=gaze_x,
        gaze_y=gaze_y,
    )


def serialize_gaze_export(samples: Iterable[GazeSample], sink: str | Path | IO[str]) -> None:
    """Write samples in the canonical tab-separated export form.

    parse_gaze_export(serialize_gaze_export(s)) round-trips every field.
    """
    own = isinstance(sink, (str, Path))
    out: IO[str] = open(sink, "w", encoding="utf-8", newline="") if own else sink  # type: ignore[assignment]
    try:
        out.write("\t".join(DEFAULT_COLUMNS[k] for k in DEFAULT_COLUMNS) + "\n")
        for s in samples:
            row = [
                s.participant_id,
                s.recording_date.isoformat(),
                _format_time_ms(s.recording_start),
                str(s.t_rec),
                "" if s.gaze_x is None else repr(s.gaze_x),
                "" if s.gaze_y is None else repr(s.gaze_y),
                s.movement_type,
                str(s.event_duration),
                str(s.event_index),
            ]
            out.write("\t".join(row) + "\n")
    finally:
        if own:
            out.close()


def quality_filter(
    samples: Sequence[GazeSample],
    threshold: float,
    participant_id: str | None = None,
) -> QualityReport:
    """Flag a learner for exclusion when the EyesNotFound share of their
    stream exceeds ``threshold`` (strictly)."""
    if not 0.0 <= threshold <= 1.0:
        raise DataError(f"threshold must lie in [0,1], got {threshold}")
    pid = participant_id if participant_id is not None else (
        samples[0].participant_id if samples else ""
    )
    total = len(samples)
    if total == 0:
        return QualityReport(pid, 0, 0.0, True, "no data")
    n_enf = sum(1 for s in samples if s.movement_type == EYES_NOT_FOUND)
    fraction = n_enf / total
    excluded = fraction > threshold
    reason = (
        f"EyesNotFound fraction {fraction:.4f} > threshold {threshold:.4f}"
        if excluded
        else ""
    )
    return QualityReport(pid, total, fraction, excluded, reason)


def parse_session_meta(
    source: str | Path | bytes | IO,
) -> tuple[list[LearnerMeta], list[ActivityInterval]]:
    """Parse the session metadata shim.

    Line format (tab-separated, comma accepted when no tab is present):

        learner   <id>  <sex>  <group>  <html level>  <background>  <score>
        interval  <id>  <activity>  <t_start ms>  <t_end ms>

    Intervals come back sorted by t_start within each learner.
    """
    metas: dict[str, LearnerMeta] = {}
    intervals: list[ActivityInterval] = []
    stream = _open_text(source)
    try:
        for line_no, line in enumerate(stream, start=1):
            raw = line.rstrip("\r\n")
            if not raw.strip() or raw.lstrip().startswith("#"):
                continue
            fields_ = raw.split("\t") if "\t" in raw else raw.split(",")
            fields_ = [f.strip() for f in fields_]
            tag = fields_[0]
            try:
                if tag == "learner":
                    meta = _parse_learner(fields_)
                    if meta.participant_id in metas:
                        raise DataError(
                            f"duplicate participant_id {meta.participant_id!r} at line {line_no}"
                        )
                    metas[meta.participant_id] = meta
                elif tag == "interval":
                    intervals.append(_parse_interval(fields_))
                else:
                    raise DataError(f"unknown record tag {tag!r} at line {line_no}")
            except (ValueError, IndexError) as exc:
                raise DataError(f"bad metadata record at line {line_no}: {exc}") from exc
    finally:
        if isinstance(source, (str, Path)):
            stream.close()
    intervals.sort(key=lambda iv: (iv.participant_id, iv.t_start, iv.t_end))
    return list(metas.values()), intervals


def _parse_learner(fields_: Sequence[str]) -> LearnerMeta:
    _, pid, sex, group, html_level, background, score = fields_[:7]
    if sex not in SEXES:
        raise ValueError(f"sex must be one of {SEXES}, got {sex!r}")
    if group not in GROUPS:
        raise ValueError(f"group must be one of {GROUPS}, got {group!r}")
    return LearnerMeta(pid, sex, group, html_level, background, float(score))


def _parse_interval(fields_: Sequence[str]) -> ActivityInterval:
    _, pid, activity, t_start, t_end = fields_[:5]
    start, end = int(t_start), int(t_end)
    if start >= end:
        raise ValueError(f"interval must satisfy t_start < t_end, got [{start}, {end})")
    return ActivityInterval(pid, activity, start, end)


def serialize_session_meta(
    metas: Iterable[LearnerMeta],
    intervals: Iterable[ActivityInterval],
    sink: str | Path | IO[str],
) -> None:
    own = isinstance(sink, (str, Path))
    out: IO[str] = open(sink, "w", encoding="utf-8", newline="") if own else sink  # type: ignore[assignment]
    try:
        for m in metas:
            out.write(
                "\t".join(
                    [
                        "learner",
                        m.participant_id,
                        m.sex,
                        m.group,
                        m.html_level,
                        m.academic_background,
                        repr(m.learning_score),
                    ]
                )
                + "\n"
            )
        for iv in intervals:
            out.write(
                "\t".join(
                    ["interval", iv.participant_id, iv.activity_id, str(iv.t_start), str(iv.t_end)]
                )
                + "\n"
            )
    finally:
        if own:
            out.close()
