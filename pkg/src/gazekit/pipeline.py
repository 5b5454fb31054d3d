"""Glue between raw session files and the per-module operations.

The CLI commands all start the same way: parse the metadata shim, parse
each learner's gaze export, drop learners the quality filter excludes,
then tag/segment/deduplicate. This module does that walk once so each
command stays a few lines.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .config import Config
from .errors import DataError
from .features import EventReport, GazeEvent, collect_events
from .ingest import (
    ActivityInterval,
    GazeParseReport,
    GazeSample,
    LearnerMeta,
    QualityReport,
    parse_gaze_export,
    parse_session_meta,
    quality_filter,
)
from .timeline import Segment, TaggedSample, epoch_from_samples, segmentize, tag_samples


@dataclass
class LearnerData:
    """Everything the pipeline derives for one included learner."""

    meta: LearnerMeta
    samples: list[GazeSample]
    tagged: list[TaggedSample]
    segments: list[Segment]
    events: list[GazeEvent]
    event_report: EventReport
    quality: QualityReport
    intervals: list[ActivityInterval]
    parse_report: GazeParseReport


@dataclass
class SessionData:
    learners: list[LearnerData]
    quality: list[QualityReport]  # every learner, excluded ones included
    notes: list[str] = field(default_factory=list)


def find_gaze_files(gaze_path: str | Path) -> list[Path]:
    p = Path(gaze_path)
    if p.is_file():
        return [p]
    if p.is_dir():
        files = sorted(q for q in p.iterdir() if q.suffix.lower() in (".tsv", ".csv"))
        if not files:
            raise DataError(f"no .tsv/.csv gaze exports under {p}")
        return files
    raise DataError(f"gaze path does not exist: {p}")


def load_session(gaze_path: str | Path, meta_path: str | Path, cfg: Config) -> SessionData:
    """Parse, quality-filter, tag, segment, and deduplicate a whole session."""
    metas, intervals = parse_session_meta(meta_path)
    meta_by_pid = {m.participant_id: m for m in metas}
    intervals_by_pid: dict[str, list[ActivityInterval]] = {}
    for iv in intervals:
        intervals_by_pid.setdefault(iv.participant_id, []).append(iv)

    session = SessionData(learners=[], quality=[])
    seen: set[str] = set()
    for path in find_gaze_files(gaze_path):
        samples, parse_report = parse_gaze_export(path, cfg.ingest.column_map)
        if parse_report.n_malformed:
            session.notes.append(
                f"{path.name}: skipped {parse_report.n_malformed} malformed row(s)"
            )
        pid = samples[0].participant_id if samples else path.stem
        if pid in seen:
            raise DataError(f"participant {pid!r} appears in more than one gaze export")
        seen.add(pid)

        quality = quality_filter(samples, cfg.ingest.enf_exclusion_threshold, pid)
        session.quality.append(quality)
        if quality.excluded:
            session.notes.append(f"{pid}: excluded ({quality.reason})")
            continue
        meta = meta_by_pid.get(pid)
        if meta is None:
            session.notes.append(f"{pid}: no metadata record, skipped")
            continue
        learner_intervals = intervals_by_pid.get(pid, [])
        if not learner_intervals:
            session.notes.append(f"{pid}: no activity intervals, skipped")
            continue

        epoch = epoch_from_samples(samples, cfg.timeline.clock_offset_ms)
        tagged = tag_samples(samples, learner_intervals, epoch)
        events, event_report = collect_events(tagged)
        session.learners.append(
            LearnerData(
                meta=meta,
                samples=samples,
                tagged=tagged,
                segments=segmentize(tagged),
                events=events,
                event_report=event_report,
                quality=quality,
                intervals=learner_intervals,
                parse_report=parse_report,
            )
        )
    # Metadata-only learners (no gaze export) still get a quality verdict.
    for pid in sorted(meta_by_pid):
        if pid not in seen:
            session.quality.append(quality_filter([], cfg.ingest.enf_exclusion_threshold, pid))
            session.notes.append(f"{pid}: no gaze export")
    return session
