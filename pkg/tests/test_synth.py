import math
from pathlib import Path

import pytest

from gazekit.config import Config
from gazekit.errors import ConfigError
from gazekit.features import collect_events, make_dataset, saccade_velocity
from gazekit.ingest import SACCADE, parse_gaze_export, parse_session_meta, quality_filter
from gazekit.pipeline import load_session
from gazekit.synth import ActivityParams, SynthConfig, generate_session


def short_config(**overrides):
    base = dict(
        n_learners=4,
        script=(("Video", 40_000), ("Reading", 40_000)),
        activity_params={
            "Video": ActivityParams(saccades_per_min=110.0, velocity_mean=1.1),
            "Reading": ActivityParams(saccades_per_min=180.0, velocity_mean=2.2),
        },
        seed=11,
    )
    base.update(overrides)
    return SynthConfig(**base)


def truncated_normal_mean(mean, std):
    """E[X | X > 0] for X ~ N(mean, std): the generator redraws at zero."""
    alpha = -mean / std
    phi = math.exp(-0.5 * alpha * alpha) / math.sqrt(2 * math.pi)
    big_phi = 0.5 * (1.0 + math.erf(-alpha / math.sqrt(2.0)))  # P[X > 0]
    return mean + std * phi / big_phi


class TestGenerateSession:
    def test_groups_split_evenly(self, tmp_path):
        cfg = short_config(n_learners=12)
        result = generate_session(cfg, tmp_path)
        per_group = {}
        for m in result.metas:
            per_group[m.group] = per_group.get(m.group, 0) + 1
        assert per_group == {"G1": 4, "G2": 4, "G3": 4}

    def test_outputs_parse_cleanly(self, tmp_path):
        result = generate_session(short_config(), tmp_path)
        metas, intervals = parse_session_meta(result.meta_path)
        assert len(metas) == 4
        for pid, path in result.gaze_paths.items():
            samples, report = parse_gaze_export(path)
            assert report.fatal is None
            assert report.n_malformed == 0
            assert samples[0].participant_id == pid

    def test_full_pipeline_zero_errors_at_default_config(self, tmp_path):
        result = generate_session(short_config(), tmp_path)
        session = load_session(tmp_path / "gaze", result.meta_path, Config())
        assert len(session.learners) == 4
        for ld in session.learners:
            assert ld.parse_report.n_malformed == 0
            assert not ld.event_report.cross_activity
            assert not ld.event_report.dropped_zero_duration

    def test_high_enf_rate_excludes_everyone(self, tmp_path):
        cfg = short_config(eyes_not_found_rate=0.5)
        result = generate_session(cfg, tmp_path)
        for path in result.gaze_paths.values():
            samples, _ = parse_gaze_export(path)
            report = quality_filter(samples, 0.30)
            assert report.excluded

    def test_byte_identical_given_seed(self, tmp_path):
        cfg = short_config(n_learners=2)
        r1 = generate_session(cfg, tmp_path / "a")
        r2 = generate_session(cfg, tmp_path / "b")
        for pid in r1.gaze_paths:
            assert r1.gaze_paths[pid].read_bytes() == r2.gaze_paths[pid].read_bytes()
        assert r1.meta_path.read_bytes() == r2.meta_path.read_bytes()

    def test_different_seed_differs(self, tmp_path):
        r1 = generate_session(short_config(n_learners=2, seed=1), tmp_path / "a")
        r2 = generate_session(short_config(n_learners=2, seed=2), tmp_path / "b")
        pid = next(iter(r1.gaze_paths))
        assert r1.gaze_paths[pid].read_bytes() != r2.gaze_paths[pid].read_bytes()

    def test_inconsistent_proportions_config_error(self, tmp_path):
        with pytest.raises(ConfigError):
            generate_session(short_config(group_weights=(1.0, 1.0)), tmp_path)
        with pytest.raises(ConfigError):
            generate_session(short_config(group_weights=(0.0, 0.0, 0.0)), tmp_path)
        with pytest.raises(ConfigError):
            generate_session(short_config(eyes_not_found_rate=1.5), tmp_path)

    def test_saccade_rate_too_high_rejected(self, tmp_path):
        cfg = short_config(
            activity_params={
                "Video": ActivityParams(saccades_per_min=900.0),
                "Reading": ActivityParams(),
            }
        )
        with pytest.raises(ConfigError, match="rate"):
            generate_session(cfg, tmp_path)

    def test_event_indices_are_tobii_like(self, tmp_path):
        result = generate_session(short_config(n_learners=1), tmp_path)
        samples, _ = parse_gaze_export(next(iter(result.gaze_paths.values())))
        last_idx = {}
        for s in samples:
            prev = last_idx.get(s.movement_type, 0)
            assert s.event_index >= prev  # non-decreasing per movement type
            last_idx[s.movement_type] = s.event_index


class TestStatisticalRecovery:
    def test_velocity_means_recovered_within_3_se(self, tmp_path):
        # Law-of-large-numbers oracle: per-class mean window velocity matches
        # the truncated-normal mean the generator draws from, within 3
        # standard errors of the window-mean estimate.
        cfg = SynthConfig(
            n_learners=6,
            groups=("G2", "G3"),
            group_weights=(1.0, 1.0),
            script=(("Video", 120_000), ("Reading", 120_000)),
            activity_params={
                "Video": ActivityParams(saccades_per_min=150.0, velocity_mean=1.0, velocity_std=0.5),
                "Reading": ActivityParams(saccades_per_min=150.0, velocity_mean=3.0, velocity_std=0.5),
            },
            eyes_not_found_rate=0.0,
            seed=29,
        )
        result = generate_session(cfg, tmp_path)
        session = load_session(tmp_path / "gaze", result.meta_path, Config())
        dataset, _ = make_dataset(
            ((ld.meta, ld.segments, ld.events) for ld in session.learners),
            window_ms=10_000,
            balance=False,
            seed=0,
            groups=("G2", "G3"),
        )
        by_label = {}
        for v in dataset.vectors:
            by_label.setdefault(v.label, []).append(v.v_mean)
        for label, configured in (("VideoWatching", (1.0, 0.5)), ("Reading", (3.0, 0.5))):
            values = by_label[label]
            n = len(values)
            assert n >= 30
            mean = sum(values) / n
            var = sum((v - mean) ** 2 for v in values) / (n - 1)
            se = math.sqrt(var / n)
            expected = truncated_normal_mean(*configured)
            assert abs(mean - expected) <= 3 * se, (label, mean, expected, se)

    def test_injected_group_effect_detected_by_anova(self, tmp_path):
        from gazekit.features import build_profiles
        from gazekit.stats import anova_by_factor

        def session_profiles(effects, seed):
            cfg = short_config(
                n_learners=9,
                groups=("G1", "G2", "G3"),
                group_weights=(1.0, 1.0, 1.0),
                effects=effects,
                seed=seed,
            )
            result = generate_session(cfg, tmp_path / f"s{seed}{bool(effects)}")
            session = load_session(
                tmp_path / f"s{seed}{bool(effects)}" / "gaze", result.meta_path, Config()
            )
            groups = {}
            for ld in session.learners:
                profiles = build_profiles(ld.meta.participant_id, ld.events, ld.intervals)
                whole = next(p for p in profiles if p.activity_id == "WholeSession")
                groups.setdefault(ld.meta.group, []).append(whole.avg_saccade_rate)
            return groups

        # A large injected rate shift must light up; the same seed without
        # the shift must not.
        effect = {"group": {"G3": {"saccades_per_min": 60.0}}}
        shifted = anova_by_factor(
            session_profiles(effect, seed=5),
            parameter="avg_saccade_rate", factor="group", alpha=0.01,
        )
        assert shifted.significant

        flat = anova_by_factor(
            session_profiles({}, seed=5),
            parameter="avg_saccade_rate", factor="group", alpha=0.01,
        )
        assert not flat.significant

    def test_per_event_velocity_equals_drawn_speed_structurally(self, tmp_path):
        # The generator interpolates saccade samples so that the measured
        # net-displacement velocity is exactly the drawn speed; verify the
        # pipeline sees plausible magnitudes, all strictly positive.
        cfg = short_config(n_learners=1, eyes_not_found_rate=0.0)
        result = generate_session(cfg, tmp_path)
        session = load_session(tmp_path / "gaze", result.meta_path, Config())
        events = session.learners[0].events
        speeds = [saccade_velocity(e)[0] for e in events if e.movement_type == SACCADE]
        assert len(speeds) > 50
        assert all(s > 0 for s in speeds)
