"""Clock normalization and activity tagging.

The recorder clock starts at 0 per learner; the metadata intervals live on
the session clock. A constant per-learner offset reconciles the two. Every
sample then gets exactly one tag: the activity whose half-open interval
[t_start, t_end) contains it, or Untagged.
"""
from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from typing import Sequence

from .errors import ConfigError, StreamError
from .ingest import ActivityInterval, GazeSample

UNTAGGED = "Untagged"


@dataclass(frozen=True)
class SessionEpoch:
    participant_id: str
    epoch: datetime  # recording_date + recording_start
    clock_offset_ms: int = 0  # metadata clock minus recorder clock


@dataclass(frozen=True, slots=True)
class TaggedSample:
    sample: GazeSample
    t_abs: int  # ms on the session clock
    activity_id: str  # activity name, or UNTAGGED


@dataclass(frozen=True)
class Segment:
    """Maximal run of identically tagged samples."""

    activity_id: str
    t_start: int  # t_abs of the first sample in the run
    t_end: int  # t_abs of the last sample in the run
    n_samples: int


def epoch_from_samples(
    samples: Sequence[GazeSample], clock_offset_ms: int = 0
) -> SessionEpoch:
    if not samples:
        raise StreamError("cannot derive a session epoch from an empty stream")
    first = samples[0]
    return SessionEpoch(
        participant_id=first.participant_id,
        epoch=datetime.combine(first.recording_date, first.recording_start),
        clock_offset_ms=clock_offset_ms,
    )


def normalize_time(sample: GazeSample, epoch: SessionEpoch) -> int:
    """Recorder timestamp -> session clock. Total and strictly monotone in t_rec."""
    return sample.t_rec + epoch.clock_offset_ms


def check_intervals(intervals: Sequence[ActivityInterval]) -> list[ActivityInterval]:
    """Sort one learner's intervals and reject overlaps (touching is fine)."""
    ordered = sorted(intervals, key=lambda iv: (iv.t_start, iv.t_end))
    for prev, cur in zip(ordered, ordered[1:]):
        if cur.t_start < prev.t_end:
            raise ConfigError(
                f"overlapping activity intervals for {cur.participant_id!r}: "
                f"[{prev.t_start},{prev.t_end}) and [{cur.t_start},{cur.t_end})"
            )
    return ordered


def tag_samples(
    samples: Sequence[GazeSample],
    intervals: Sequence[ActivityInterval],
    epoch: SessionEpoch,
) -> list[TaggedSample]:
    """Tag every sample with its activity via a linear merge.

    Both inputs are time-ordered, so one pass suffices; output order equals
    input order and untagged samples are kept.
    """
    ordered = check_intervals(intervals)
    tagged: list[TaggedSample] = []
    j = 0
    prev_t: int | None = None
    for s in samples:
        t = normalize_time(s, epoch)
        if prev_t is not None and t < prev_t:
            raise StreamError(f"sample stream runs backwards at t_abs={t}")
        prev_t = t
        while j < len(ordered) and ordered[j].t_end <= t:
            j += 1
        if j < len(ordered) and ordered[j].t_start <= t < ordered[j].t_end:
            tag = ordered[j].activity_id
        else:
            tag = UNTAGGED
        tagged.append(TaggedSample(sample=s, t_abs=t, activity_id=tag))
    return tagged


def segmentize(tagged: Sequence[TaggedSample]) -> list[Segment]:
    """Run-length encode the tag stream.

    The segments partition the input: concatenating their sample counts
    reproduces the stream.
    """
    segments: list[Segment] = []
    run_start = 0
    for i in range(1, len(tagged) + 1):
        if i == len(tagged) or tagged[i].activity_id != tagged[run_start].activity_id:
            segments.append(
                Segment(
                    activity_id=tagged[run_start].activity_id,
                    t_start=tagged[run_start].t_abs,
                    t_end=tagged[i - 1].t_abs,
                    n_samples=i - run_start,
                )
            )
            run_start = i
    return segments
