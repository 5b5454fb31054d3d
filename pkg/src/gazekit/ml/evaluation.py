"""Evaluation protocols and the reported metric surface.

Two protocols: a single stratified 75/25 split (by sample, or by whole
learner) and leave-one-out cross-validation, whose N held-out predictions
aggregate into one confusion matrix. Reports carry accuracy plus per-class
precision/recall/F1 for Video watching and Reading, in that presentation
order.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ..errors import DataError
from ..features import LABELS
from .forest import ForestHyperparams, predict_forest_batch, train_forest
from .mlp import MlpHyperparams, predict_mlp, train_mlp

PROTOCOL_SPLIT = "split75_25"
PROTOCOL_LOOCV = "loocv"

MODEL_DISPLAY = {"rf": "Random Forest", "mlp": "Neural Network"}

# Presentation order in reports: the Video watching block comes first
# (class id 1), then Reading.
REPORT_CLASS_ORDER = ("VideoWatching", "Reading")
_CLASS_DISPLAY = {"VideoWatching": "Video watching", "Reading": "Reading"}


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    flags: tuple[str, ...] = ()  # zero-denominator conventions applied


@dataclass
class EvalReport:
    model_name: str  # "rf" | "mlp"
    protocol: str
    accuracy: float
    per_class: dict[str, ClassMetrics]
    confusion: list[list[int]]  # confusion[actual][predicted], LABELS order
    n_evaluated: int
    seed: int
    split_by: str = "sample"  # split75_25: "sample"|"learner"; loocv: unit
    balanced: bool | None = None

    def to_record(self) -> dict:
        return {
            "model_name": self.model_name,
            "protocol": self.protocol,
            "accuracy": self.accuracy,
            "per_class": {
                name: {
                    "precision": m.precision,
                    "recall": m.recall,
                    "f1": m.f1,
                    "flags": list(m.flags),
                }
                for name, m in self.per_class.items()
            },
            "confusion": self.confusion,
            "n_evaluated": self.n_evaluated,
            "seed": self.seed,
            "split_by": self.split_by,
            "balanced": self.balanced,
        }

    @staticmethod
    def from_record(rec: dict) -> "EvalReport":
        return EvalReport(
            model_name=rec["model_name"],
            protocol=rec["protocol"],
            accuracy=rec["accuracy"],
            per_class={
                name: ClassMetrics(
                    precision=m["precision"],
                    recall=m["recall"],
                    f1=m["f1"],
                    flags=tuple(m["flags"]),
                )
                for name, m in rec["per_class"].items()
            },
            confusion=[list(row) for row in rec["confusion"]],
            n_evaluated=rec["n_evaluated"],
            seed=rec["seed"],
            split_by=rec["split_by"],
            balanced=rec["balanced"],
        )


def metrics_from_confusion(
    confusion: Sequence[Sequence[int]],
) -> tuple[float, dict[str, ClassMetrics]]:
    """Standard accuracy/precision/recall/F1 from a 2x2 confusion matrix.

    Zero denominators yield a 0 metric plus a flag instead of NaN.
    """
    c = np.asarray(confusion, dtype=int)
    if c.shape != (2, 2) or (c < 0).any():
        raise DataError("confusion matrix must be 2x2 with non-negative counts")
    total = int(c.sum())
    if total == 0:
        raise DataError("confusion matrix is empty")
    accuracy = float(np.trace(c)) / total

    per_class: dict[str, ClassMetrics] = {}
    for cls_id, name in enumerate(LABELS):
        tp = int(c[cls_id, cls_id])
        fp = int(c[1 - cls_id, cls_id])
        fn = int(c[cls_id, 1 - cls_id])
        flags: list[str] = []
        precision = recall = f1 = 0.0
        if tp + fp > 0:
            precision = tp / (tp + fp)
        else:
            flags.append("precision-zero-denominator")
        if tp + fn > 0:
            recall = tp / (tp + fn)
        else:
            flags.append("recall-zero-denominator")
        if precision + recall > 0:
            f1 = 2 * precision * recall / (precision + recall)
        else:
            flags.append("f1-zero-denominator")
        per_class[name] = ClassMetrics(precision, recall, f1, tuple(flags))
    return accuracy, per_class


Predictor = Callable[[np.ndarray], np.ndarray]
Trainer = Callable[[np.ndarray, np.ndarray, int], Predictor]


def make_trainer(
    model_name: str,
    forest_hp: ForestHyperparams | None = None,
    mlp_hp: MlpHyperparams | None = None,
) -> Trainer:
    """Package a model family as train(X, y, seed) -> predict(X) -> class ids."""
    if model_name == "rf":
        base = forest_hp or ForestHyperparams()

        def train_rf(X: np.ndarray, y: np.ndarray, seed: int) -> Predictor:
            hp = ForestHyperparams(base.n_trees, base.max_features, base.min_leaf, seed)
            model = train_forest(X, y, hp)
            return lambda Xq: predict_forest_batch(model, Xq)

        return train_rf
    if model_name == "mlp":
        base_mlp = mlp_hp or MlpHyperparams()

        def train_nn(X: np.ndarray, y: np.ndarray, seed: int) -> Predictor:
            hp = MlpHyperparams(base_mlp.epochs, base_mlp.batch_size, base_mlp.learning_rate, seed)
            model, std, _ = train_mlp(X, y, hp)
            return lambda Xq: predict_mlp(model, std, Xq)[0]

        return train_nn
    raise DataError(f"unknown model {model_name!r} (expected 'rf' or 'mlp')")


def split_75_25(
    y: np.ndarray,
    learner_ids: Sequence[str],
    seed: int,
    *,
    by: str = "sample",
    train_fraction: float = 0.75,
) -> tuple[np.ndarray, np.ndarray]:
    """One seeded random split.

    by="sample": stratified per class, floor(train_fraction * n_c) samples
    to train. by="learner": whole learners move together (first
    floor(fraction * n_learners) shuffled learners train).
    """
    if not 0.0 < train_fraction < 1.0:
        raise DataError(f"train_fraction must lie in (0,1), got {train_fraction}")
    rng = np.random.default_rng(seed)
    n = len(y)
    if by == "sample":
        train_idx: list[int] = []
        test_idx: list[int] = []
        for cls in range(len(LABELS)):
            idx = np.nonzero(y == cls)[0]
            perm = rng.permutation(len(idx))
            cut = int(len(idx) * train_fraction)
            train_idx.extend(idx[perm[:cut]])
            test_idx.extend(idx[perm[cut:]])
        return np.sort(np.array(train_idx, dtype=int)), np.sort(np.array(test_idx, dtype=int))
    if by == "learner":
        learners = sorted(set(learner_ids))
        perm = rng.permutation(len(learners))
        cut = int(len(learners) * train_fraction)
        train_set = {learners[i] for i in perm[:cut]}
        mask = np.array([pid in train_set for pid in learner_ids])
        return np.nonzero(mask)[0], np.nonzero(~mask)[0]
    raise DataError(f"unknown split mode {by!r}")


def evaluate(
    model_name: str,
    X: np.ndarray,
    y: np.ndarray,
    learner_ids: Sequence[str],
    *,
    protocol: str,
    seed: int,
    split_by: str = "sample",
    loocv_unit: str = "sample",
    train_fraction: float = 0.75,
    forest_hp: ForestHyperparams | None = None,
    mlp_hp: MlpHyperparams | None = None,
) -> EvalReport:
    """Run one protocol for one model family and report its metrics.

    LOOCV rounds use seeds pre-derived from ``seed``, so any parallel
    execution order would reproduce the sequential result exactly.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    if len(X) < 4:
        raise DataError(f"need at least 4 samples to evaluate, got {len(X)}")
    trainer = make_trainer(model_name, forest_hp, mlp_hp)
    counts = [int(np.sum(y == c)) for c in range(len(LABELS))]
    balanced = counts[0] == counts[1]
    confusion = np.zeros((2, 2), dtype=int)

    if protocol == PROTOCOL_SPLIT:
        train_idx, test_idx = split_75_25(
            y, learner_ids, seed, by=split_by, train_fraction=train_fraction
        )
        if len(train_idx) == 0 or len(test_idx) == 0:
            raise DataError("75/25 split produced an empty side")
        predict = trainer(X[train_idx], y[train_idx], seed)
        pred = predict(X[test_idx])
        for actual, p in zip(y[test_idx], pred):
            confusion[actual, p] += 1
        n_eval = len(test_idx)
        unit = split_by
    elif protocol == PROTOCOL_LOOCV:
        if loocv_unit == "sample":
            folds = [np.array([i]) for i in range(len(y))]
        elif loocv_unit == "learner":
            ids = np.asarray(learner_ids)
            folds = [np.nonzero(ids == pid)[0] for pid in sorted(set(learner_ids))]
        else:
            raise DataError(f"unknown LOOCV unit {loocv_unit!r}")
        round_seeds = [
            int(s.generate_state(1)[0])
            for s in np.random.SeedSequence(seed).spawn(len(folds))
        ]
        mask = np.ones(len(y), dtype=bool)
        for fold, round_seed in zip(folds, round_seeds):
            mask[fold] = False
            predict = trainer(X[mask], y[mask], round_seed)
            pred = predict(X[fold])
            for actual, p in zip(y[fold], pred):
                confusion[actual, p] += 1
            mask[fold] = True
        n_eval = len(y)
        unit = loocv_unit
    else:
        raise DataError(f"unknown protocol {protocol!r}")

    accuracy, per_class = metrics_from_confusion(confusion)
    return EvalReport(
        model_name=model_name,
        protocol=protocol,
        accuracy=accuracy,
        per_class=per_class,
        confusion=confusion.tolist(),
        n_evaluated=n_eval,
        seed=seed,
        split_by=unit,
        balanced=balanced,
    )


def format_eval_table(reports: Sequence[EvalReport]) -> str:
    """Fixed-width text results table: an accuracy row,
    then Precision/Recall/F1-Score blocks for Video watching and Reading."""
    if not reports:
        raise DataError("no evaluation reports to format")
    names = [MODEL_DISPLAY.get(r.model_name, r.model_name) for r in reports]
    left_w = 28
    col_w = max(16, max(len(n) for n in names) + 2)

    def row(label: str, values: list[str]) -> str:
        return label.ljust(left_w) + "".join(v.rjust(col_w) for v in values)

    lines = [row("", names)]
    lines.append(row("Accuracy test", [f"{r.accuracy:.2f}" for r in reports]))
    for cls in REPORT_CLASS_ORDER:
        display = _CLASS_DISPLAY[cls]
        lines.append(
            row(f"{display}  Precision", [f"{r.per_class[cls].precision:.2f}" for r in reports])
        )
        lines.append(
            row(f"{display}  Recall", [f"{r.per_class[cls].recall:.2f}" for r in reports])
        )
        lines.append(
            row(f"{display}  F1-Score", [f"{r.per_class[cls].f1:.2f}" for r in reports])
        )
    return "\n".join(lines)
