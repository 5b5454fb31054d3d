import random

import numpy as np
import pytest

from gazekit.errors import DataError
from gazekit.ml import ForestHyperparams, MlpHyperparams
from gazekit.ml.evaluation import (
    EvalReport,
    evaluate,
    format_eval_table,
    metrics_from_confusion,
    split_75_25,
)


def two_clusters(n_per_class, separation, noise, seed):
    rng = np.random.default_rng(seed)
    X = np.vstack(
        [
            rng.normal(0.0, noise, size=(n_per_class, 16)),
            rng.normal(separation, noise, size=(n_per_class, 16)),
        ]
    )
    y = np.array([0] * n_per_class + [1] * n_per_class)
    ids = [f"P{i % 8:03d}" for i in range(len(y))]
    return X, y, ids


class TestMetricsFromConfusion:
    def test_perfect_classifier(self):
        accuracy, per_class = metrics_from_confusion([[10, 0], [0, 10]])
        assert accuracy == 1.0
        for m in per_class.values():
            assert (m.precision, m.recall, m.f1) == (1.0, 1.0, 1.0)
            assert m.flags == ()

    def test_constant_reading_on_balanced_data(self):
        # Everything predicted class 0 (Reading): accuracy 0.5,
        # Reading recall 1.0, VideoWatching recall 0.0.
        accuracy, per_class = metrics_from_confusion([[50, 0], [50, 0]])
        assert accuracy == 0.5
        assert per_class["Reading"].recall == 1.0
        assert per_class["VideoWatching"].recall == 0.0
        assert "precision-zero-denominator" in per_class["VideoWatching"].flags

    def test_zero_denominator_convention(self):
        # No Video predictions and no Video actuals: TP=0, FP=0 -> flagged 0.
        accuracy, per_class = metrics_from_confusion([[10, 0], [0, 0]])
        video = per_class["VideoWatching"]
        assert video.precision == 0.0
        assert video.flags != ()

    def test_random_matrices_match_direct_formula_oracle(self):
        rng = random.Random(13)
        for _ in range(200):
            c = [[rng.randrange(0, 30) for _ in range(2)] for _ in range(2)]
            if sum(map(sum, c)) == 0:
                continue
            accuracy, per_class = metrics_from_confusion(c)
            total = sum(map(sum, c))
            assert accuracy == pytest.approx((c[0][0] + c[1][1]) / total)
            for cls, name in ((0, "Reading"), (1, "VideoWatching")):
                tp = c[cls][cls]
                fp = c[1 - cls][cls]
                fn = c[cls][1 - cls]
                p = tp / (tp + fp) if tp + fp else 0.0
                r = tp / (tp + fn) if tp + fn else 0.0
                f1 = 2 * p * r / (p + r) if p + r else 0.0
                m = per_class[name]
                assert m.precision == pytest.approx(p)
                assert m.recall == pytest.approx(r)
                assert m.f1 == pytest.approx(f1)

    def test_f1_is_harmonic_mean(self):
        _, per_class = metrics_from_confusion([[8, 2], [3, 7]])
        for m in per_class.values():
            assert m.f1 == pytest.approx(
                2 * m.precision * m.recall / (m.precision + m.recall)
            )

    def test_rejects_bad_shapes(self):
        with pytest.raises(DataError):
            metrics_from_confusion([[1, 2, 3], [4, 5, 6]])
        with pytest.raises(DataError):
            metrics_from_confusion([[0, 0], [0, 0]])


class TestSplit7525:
    def test_stratified_proportions(self):
        y = np.array([0] * 100 + [1] * 60)
        ids = [f"P{i:03d}" for i in range(160)]
        train, test = split_75_25(y, ids, seed=1)
        assert len(train) + len(test) == 160
        assert np.sum(y[train] == 0) == 75
        assert np.sum(y[train] == 1) == 45
        assert set(train).isdisjoint(test)

    def test_deterministic_under_seed(self):
        y = np.array([0, 1] * 40)
        ids = [f"P{i % 5}" for i in range(80)]
        a = split_75_25(y, ids, seed=7)
        b = split_75_25(y, ids, seed=7)
        c = split_75_25(y, ids, seed=8)
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
        assert not np.array_equal(a[0], c[0])

    def test_by_learner_keeps_learners_together(self):
        y = np.array([0, 1] * 40)
        ids = [f"P{i % 8}" for i in range(80)]
        train, test = split_75_25(y, ids, seed=3, by="learner")
        train_ids = {ids[i] for i in train}
        test_ids = {ids[i] for i in test}
        assert train_ids.isdisjoint(test_ids)
        assert len(train_ids) == 6  # floor(0.75 * 8)


class TestEvaluate:
    def test_split_protocol_on_separable_data(self):
        X, y, ids = two_clusters(40, separation=6.0, noise=0.5, seed=1)
        report = evaluate(
            "rf", X, y, ids, protocol="split75_25", seed=2,
            forest_hp=ForestHyperparams(n_trees=11, seed=0),
        )
        assert report.accuracy == 1.0
        assert report.n_evaluated == 20  # 25% of 80
        assert sum(map(sum, report.confusion)) == 20
        assert report.balanced is True

    def test_loocv_each_sample_predicted_once(self):
        X, y, ids = two_clusters(12, separation=6.0, noise=0.5, seed=4)
        report = evaluate(
            "rf", X, y, ids, protocol="loocv", seed=5,
            forest_hp=ForestHyperparams(n_trees=5, seed=0),
        )
        assert report.n_evaluated == 24
        assert sum(map(sum, report.confusion)) == 24
        assert report.accuracy == 1.0

    def test_loocv_by_learner(self):
        X, y, ids = two_clusters(12, separation=6.0, noise=0.5, seed=6)
        report = evaluate(
            "rf", X, y, ids, protocol="loocv", seed=5, loocv_unit="learner",
            forest_hp=ForestHyperparams(n_trees=5, seed=0),
        )
        assert sum(map(sum, report.confusion)) == 24
        assert report.split_by == "learner"

    def test_mlp_protocols_run(self):
        X, y, ids = two_clusters(16, separation=6.0, noise=0.5, seed=7)
        report = evaluate(
            "mlp", X, y, ids, protocol="split75_25", seed=8,
            mlp_hp=MlpHyperparams(epochs=40, seed=0),
        )
        assert report.accuracy >= 0.9

    def test_too_few_samples_rejected(self):
        X = np.zeros((3, 16))
        with pytest.raises(DataError):
            evaluate("rf", X, np.array([0, 1, 0]), ["a", "b", "c"], protocol="loocv", seed=0)

    def test_unknown_protocol_and_model(self):
        X, y, ids = two_clusters(4, 1.0, 1.0, seed=9)
        with pytest.raises(DataError):
            evaluate("rf", X, y, ids, protocol="bootstrap", seed=0)
        with pytest.raises(DataError):
            evaluate("svm", X, y, ids, protocol="loocv", seed=0)

    def test_deterministic_report(self):
        X, y, ids = two_clusters(10, separation=1.0, noise=1.0, seed=10)
        kwargs = dict(protocol="loocv", seed=11, forest_hp=ForestHyperparams(n_trees=7, seed=0))
        r1 = evaluate("rf", X, y, ids, **kwargs)
        r2 = evaluate("rf", X, y, ids, **kwargs)
        assert r1.to_record() == r2.to_record()

    def test_report_record_round_trip(self):
        X, y, ids = two_clusters(10, separation=2.0, noise=1.0, seed=12)
        report = evaluate(
            "rf", X, y, ids, protocol="split75_25", seed=13,
            forest_hp=ForestHyperparams(n_trees=3, seed=0),
        )
        back = EvalReport.from_record(report.to_record())
        assert back == report


class TestFormatEvalTable:
    def test_results_table_layout(self):
        _, per_class = metrics_from_confusion([[38, 12], [11, 39]])
        acc, _ = metrics_from_confusion([[38, 12], [11, 39]])
        reports = [
            EvalReport("rf", "loocv", acc, per_class, [[38, 12], [11, 39]], 100, 0),
            EvalReport("mlp", "loocv", acc, per_class, [[38, 12], [11, 39]], 100, 0),
        ]
        table = format_eval_table(reports)
        lines = table.splitlines()
        assert "Random Forest" in lines[0] and "Neural Network" in lines[0]
        assert lines[1].startswith("Accuracy test")
        # Video watching block precedes the Reading block, each with P/R/F1.
        assert lines[2].startswith("Video watching  Precision")
        assert lines[3].startswith("Video watching  Recall")
        assert lines[4].startswith("Video watching  F1-Score")
        assert lines[5].startswith("Reading  Precision")
        assert lines[6].startswith("Reading  Recall")
        assert lines[7].startswith("Reading  F1-Score")
        assert len(lines) == 8

    def test_values_rendered_two_decimals(self):
        _, per_class = metrics_from_confusion([[3, 1], [1, 3]])
        report = EvalReport("rf", "loocv", 0.75, per_class, [[3, 1], [1, 3]], 8, 0)
        table = format_eval_table([report])
        assert "0.75" in table.splitlines()[1]
