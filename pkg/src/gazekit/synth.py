"""Seeded synthetic learning sessions.

Stands in for the private study data: emits gaze exports and a metadata
file in the exact ingest formats, with controllable per-activity saccade
rates/velocities, EyesNotFound contamination, and per-population mean
shifts for exercising the ANOVA path. Same seed, same bytes.

These are test instruments, not oculomotor models: saccade endpoints are
placed so that the realized net-displacement velocity equals the drawn
speed exactly (speeds are redrawn until positive, so the realized mean is
the truncated-normal mean).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .ingest import (
    ACTIVITY_ASSIGNMENT,
    ACTIVITY_READING,
    ACTIVITY_VIDEO,
    EYES_NOT_FOUND,
    FIXATION,
    SACCADE,
    ActivityInterval,
    GazeSample,
    LearnerMeta,
    serialize_gaze_export,
    serialize_session_meta,
)
from datetime import date, time

_HTML_LEVELS = ("none", "basic", "intermediate", "advanced")
_BACKGROUNDS = (
    "Computer Science",
    "Telecommunications",
    "Industrial Engineering",
    "Mathematics",
    "Biology",
)


@dataclass
class ActivityParams:
    """Generative knobs for one activity type."""

    saccades_per_min: float = 150.0
    velocity_mean: float = 1.5  # px/ms
    velocity_std: float = 0.5
    saccade_duration_mean: float = 60.0  # ms
    saccade_duration_std: float = 15.0
    fixation_duration_std: float = 60.0

    def shifted(self, shifts: dict[str, float]) -> "ActivityParams":
        return ActivityParams(
            saccades_per_min=self.saccades_per_min + shifts.get("saccades_per_min", 0.0),
            velocity_mean=self.velocity_mean + shifts.get("velocity_mean", 0.0),
            velocity_std=self.velocity_std,
            saccade_duration_mean=self.saccade_duration_mean
            + shifts.get("saccade_duration_mean", 0.0),
            saccade_duration_std=self.saccade_duration_std,
            fixation_duration_std=self.fixation_duration_std,
        )


def default_activity_params() -> dict[str, ActivityParams]:
    return {
        ACTIVITY_VIDEO: ActivityParams(saccades_per_min=110.0, velocity_mean=1.1),
        ACTIVITY_READING: ActivityParams(saccades_per_min=180.0, velocity_mean=2.2),
        ACTIVITY_ASSIGNMENT: ActivityParams(saccades_per_min=140.0, velocity_mean=1.6),
    }


@dataclass
class SynthConfig:
    n_learners: int = 12
    groups: tuple[str, ...] = ("G1", "G2", "G3")
    group_weights: tuple[float, ...] = (1.0, 1.0, 1.0)
    sexes: tuple[str, ...] = ("F", "M")
    sex_weights: tuple[float, ...] = (1.0, 1.0)
    # Ordered (activity, duration ms) script shared by every learner.
    script: tuple[tuple[str, int], ...] = (
        (ACTIVITY_VIDEO, 120_000),
        (ACTIVITY_READING, 120_000),
        (ACTIVITY_ASSIGNMENT, 60_000),
    )
    activity_params: dict[str, ActivityParams] = field(default_factory=default_activity_params)
    sample_period_ms: int = 10
    eyes_not_found_rate: float = 0.02
    screen_w: float = 1920.0
    screen_h: float = 1080.0
    # factor -> level -> generative shifts, e.g.
    # {"group": {"G3": {"saccades_per_min": 30.0}}}
    effects: dict[str, dict[str, dict[str, float]]] = field(default_factory=dict)
    recording_date: str = "2024-03-15"
    recording_start: str = "10:00:00:000"
    seed: int = 7


@dataclass
class SynthResult:
    gaze_paths: dict[str, Path]
    meta_path: Path
    metas: list[LearnerMeta]
    intervals: list[ActivityInterval]
    # Ground truth per learner: the activity timeline it was generated from.
    ground_truth: dict[str, list[tuple[str, int, int]]]


def _counts_from_weights(n: int, weights: tuple[float, ...], what: str) -> list[int]:
    """Largest-remainder apportionment of n items over weights."""
    if not weights or any(w < 0 for w in weights):
        raise ConfigError(f"{what} weights must be non-negative")
    total = sum(weights)
    if total <= 0:
        raise ConfigError(f"{what} weights must not all be zero")
    raw = [n * w / total for w in weights]
    counts = [int(r) for r in raw]
    remainders = sorted(range(len(raw)), key=lambda i: (raw[i] - counts[i], -i), reverse=True)
    for i in range(n - sum(counts)):
        counts[remainders[i % len(remainders)]] += 1
    return counts


def _truncated_positive_normal(rng: np.random.Generator, mean: float, std: float) -> float:
    # Redraw until positive; for the test-relevant regimes (mean >> std)
    # this is the truncated normal with analytic mean.
    for _ in range(1000):
        v = rng.normal(mean, std)
        if v > 0:
            return v
    raise ConfigError(f"cannot draw a positive value from N({mean}, {std})")


class _LearnerGenerator:
    """Emits one learner's sample stream along the shared activity script."""

    def __init__(self, cfg: SynthConfig, params: dict[str, ActivityParams], rng: np.random.Generator):
        self.cfg = cfg
        self.params = params
        self.rng = rng
        self.indices = {FIXATION: 0, SACCADE: 0, EYES_NOT_FOUND: 0}
        self.pos = np.array([cfg.screen_w / 2.0, cfg.screen_h / 2.0])
        self.margin = 8.0

    def _next_index(self, movement_type: str) -> int:
        self.indices[movement_type] += 1
        return self.indices[movement_type]

    def _saccade_end(self, displacement: float) -> np.ndarray:
        # Rejection-sample a direction that keeps the endpoint on screen;
        # the magnitude is never altered, so realized speed == drawn speed.
        for _ in range(200):
            theta = self.rng.uniform(0.0, 2.0 * np.pi)
            end = self.pos + displacement * np.array([np.cos(theta), np.sin(theta)])
            if (
                self.margin <= end[0] <= self.cfg.screen_w - self.margin
                and self.margin <= end[1] <= self.cfg.screen_h - self.margin
            ):
                return end
        # Displacement larger than the screen: restart from the center.
        return np.array([self.cfg.screen_w / 2.0, self.cfg.screen_h / 2.0])

    def events_for_interval(
        self, activity: str, t0: int, t1: int
    ) -> list[tuple[str, int, int, int, np.ndarray, np.ndarray]]:
        """(type, index, t_begin, duration, start, end) tuples tiling [t0, t1)."""
        p = self.params[activity]
        period = self.cfg.sample_period_ms
        min_event = 3 * period  # every event must span >= 2 sample ticks
        sacc_gap = p.saccade_duration_mean
        fix_mean = 60_000.0 / p.saccades_per_min - sacc_gap
        if fix_mean <= min_event:
            raise ConfigError(
                f"saccade rate {p.saccades_per_min}/min leaves no room for fixations"
            )
        out = []
        t = t0
        next_is_fixation = True
        while t < t1:
            if next_is_fixation:
                dur = max(min_event, self.rng.normal(fix_mean, p.fixation_duration_std))
            else:
                dur = max(
                    min_event, self.rng.normal(p.saccade_duration_mean, p.saccade_duration_std)
                )
            dur = int(round(dur))
            if t + dur > t1:
                break  # do not let events straddle activity boundaries
            if self.rng.uniform() < self.cfg.eyes_not_found_rate:
                out.append((EYES_NOT_FOUND, self._next_index(EYES_NOT_FOUND), t, dur, None, None))
            elif next_is_fixation:
                out.append((FIXATION, self._next_index(FIXATION), t, dur, self.pos.copy(), self.pos.copy()))
            else:
                speed = _truncated_positive_normal(self.rng, p.velocity_mean, p.velocity_std)
                end = self._saccade_end(speed * dur)
                out.append((SACCADE, self._next_index(SACCADE), t, dur, self.pos.copy(), end))
                self.pos = end
            t += dur
            next_is_fixation = not next_is_fixation
        return out

    def samples_for_events(
        self, pid: str, events: list[tuple]
    ) -> list[GazeSample]:
        cfg = self.cfg
        rec_date = date.fromisoformat(cfg.recording_date)
        h, m, s, ms = (int(x) for x in cfg.recording_start.split(":"))
        rec_start = time(h, m, s, ms * 1000)
        period = cfg.sample_period_ms
        samples: list[GazeSample] = []
        for movement, index, t_begin, dur, start, end in events:
            first_tick = ((t_begin + period - 1) // period) * period
            ticks = range(first_tick, t_begin + dur, period)
            n = len(ticks)
            if movement != EYES_NOT_FOUND and n < 2:
                continue  # should not happen with min_event = 3 ticks
            if movement == EYES_NOT_FOUND:
                points = [(None, None)] * n
            elif movement == FIXATION:
                jitter = self.rng.normal(0.0, 1.5, size=(n, 2))
                xs = np.clip(start[0] + jitter[:, 0], 0.0, cfg.screen_w - 1.0)
                ys = np.clip(start[1] + jitter[:, 1], 0.0, cfg.screen_h - 1.0)
                points = list(zip(xs.tolist(), ys.tolist()))
            else:
                # First and last sample carry the exact endpoints so the
                # measured velocity equals the configured draw.
                frac = np.linspace(0.0, 1.0, n)
                xs = start[0] + frac * (end[0] - start[0])
                ys = start[1] + frac * (end[1] - start[1])
                points = list(zip(xs.tolist(), ys.tolist()))
            for tick, (gx, gy) in zip(ticks, points):
                samples.append(
                    GazeSample(
                        participant_id=pid,
                        recording_date=rec_date,
                        recording_start=rec_start,
                        t_rec=tick,
                        movement_type=movement,
                        event_duration=dur,
                        event_index=index,
                        gaze_x=gx,
                        gaze_y=gy,
                    )
                )
        return samples


def generate_session(cfg: SynthConfig, out_dir: str | Path) -> SynthResult:
    """Write one synthetic session to ``out_dir``.

    Produces gaze/<participant>.tsv per learner plus session_meta.tsv, all
    satisfying every ingest invariant at the default configuration.
    """
    if cfg.n_learners < 1:
        raise ConfigError("n_learners must be >= 1")
    if not 0.0 <= cfg.eyes_not_found_rate <= 1.0:
        raise ConfigError("eyes_not_found_rate must lie in [0,1]")
    if len(cfg.groups) != len(cfg.group_weights):
        raise ConfigError("groups and group_weights differ in length")
    if len(cfg.sexes) != len(cfg.sex_weights):
        raise ConfigError("sexes and sex_weights differ in length")
    for activity, _ in cfg.script:
        if activity not in cfg.activity_params:
            raise ConfigError(f"no generative params for activity {activity!r}")

    out = Path(out_dir)
    gaze_dir = out / "gaze"
    gaze_dir.mkdir(parents=True, exist_ok=True)

    root_seq = np.random.SeedSequence(cfg.seed)
    assign_rng = np.random.default_rng(root_seq.spawn(1)[0])
    learner_seqs = root_seq.spawn(cfg.n_learners + 1)[1:]

    group_counts = _counts_from_weights(cfg.n_learners, cfg.group_weights, "group")
    sex_counts = _counts_from_weights(cfg.n_learners, cfg.sex_weights, "sex")
    group_pool = [g for g, c in zip(cfg.groups, group_counts) for _ in range(c)]
    sex_pool = [s for s, c in zip(cfg.sexes, sex_counts) for _ in range(c)]
    assign_rng.shuffle(sex_pool)

    intervals_rel: list[tuple[str, int, int]] = []
    t = 0
    for activity, dur in cfg.script:
        intervals_rel.append((activity, t, t + dur))
        t += dur

    metas: list[LearnerMeta] = []
    intervals: list[ActivityInterval] = []
    gaze_paths: dict[str, Path] = {}
    ground_truth: dict[str, list[tuple[str, int, int]]] = {}

    width = max(3, len(str(cfg.n_learners)))
    for i in range(cfg.n_learners):
        pid = f"P{i + 1:0{width}d}"
        group, sex = group_pool[i], sex_pool[i]
        rng = np.random.default_rng(learner_seqs[i])
        meta = LearnerMeta(
            participant_id=pid,
            sex=sex,
            group=group,
            html_level=_HTML_LEVELS[int(rng.integers(0, len(_HTML_LEVELS)))],
            academic_background=_BACKGROUNDS[int(rng.integers(0, len(_BACKGROUNDS)))],
            learning_score=float(round(rng.uniform(-1.0, 8.0), 2)),
        )
        metas.append(meta)

        shifts: dict[str, float] = {}
        for factor, level in (("group", group), ("sex", sex)):
            level_shifts = cfg.effects.get(factor, {}).get(level, {})
            for key, val in level_shifts.items():
                shifts[key] = shifts.get(key, 0.0) + val
        params = {a: p.shifted(shifts) for a, p in cfg.activity_params.items()}

        gen = _LearnerGenerator(cfg, params, rng)
        events: list[tuple] = []
        for activity, t0, t1 in intervals_rel:
            events.extend(gen.events_for_interval(activity, t0, t1))
            intervals.append(ActivityInterval(pid, activity, t0, t1))
        ground_truth[pid] = list(intervals_rel)

        samples = gen.samples_for_events(pid, events)
        path = gaze_dir / f"{pid}.tsv"
        serialize_gaze_export(samples, path)
        gaze_paths[pid] = path

    meta_path = out / "session_meta.tsv"
    serialize_session_meta(metas, intervals, meta_path)
    return SynthResult(
        gaze_paths=gaze_paths,
        meta_path=meta_path,
        metas=metas,
        intervals=intervals,
        ground_truth=ground_truth,
    )
