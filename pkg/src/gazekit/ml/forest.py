"""Random forest classifier, written out in full.

Bootstrap-sampled Gini trees over a random feature subset per node.
Everything is driven by numpy Generators spawned from one seed, so a
parallel tree-training schedule would reproduce the sequential result
bit for bit. Ties in the forest vote go to Reading (class 0).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import DataError
from ..features import LABELS

N_FEATURES = 16


@dataclass
class ForestHyperparams:
    n_trees: int = 100
    max_features: int = 4  # ceil(sqrt(16))
    min_leaf: int = 2  # nodes smaller than this become leaves
    seed: int = 0


@dataclass
class TreeNode:
    # feature < 0 marks a leaf; counts are per-class training counts.
    feature: int = -1
    threshold: float = 0.0
    counts: tuple[int, int] = (0, 0)
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.feature < 0

    def leaf_class(self) -> int:
        # Majority class; tie toward class 0 (Reading).
        return 0 if self.counts[0] >= self.counts[1] else 1


@dataclass
class ForestModel:
    trees: list[TreeNode]
    n_trees: int
    max_features: int
    min_leaf: int
    seed: int
    oob_accuracy: float | None = None


def _gini_best_split(
    X: np.ndarray, y: np.ndarray, features: Sequence[int]
) -> tuple[int, float] | None:
    """Lowest weighted-Gini split over the candidate features.

    Returns (feature, threshold) or None when no candidate separates the
    node. Thresholds are midpoints between adjacent distinct values; ties
    resolve to the first minimum in scan order, keeping the search
    deterministic. All candidates are evaluated in one vectorized pass.
    """
    n = len(y)
    sub = X[:, features]  # (n, k)
    order = np.argsort(sub, axis=0, kind="stable")
    xs = np.take_along_axis(sub, order, axis=0)
    ones = np.cumsum(y[order], axis=0)  # prefix class-1 counts per column

    valid = xs[:-1] < xs[1:]  # split between distinct adjacent values only
    if not valid.any():
        return None
    n_left = np.arange(1, n, dtype=float)[:, None]
    n_right = n - n_left
    ones_left = ones[:-1].astype(float)
    ones_right = ones[-1] - ones_left
    # Weighted Gini: sum over sides of n_side * 2 p (1-p), normalized by n.
    gini = (
        2.0 * ones_left * (n_left - ones_left) / n_left
        + 2.0 * ones_right * (n_right - ones_right) / n_right
    ) / n
    gini[~valid] = np.inf
    flat = int(np.argmin(gini))
    row, col = divmod(flat, gini.shape[1])
    thr = float((xs[row, col] + xs[row + 1, col]) / 2.0)
    return int(features[col]), thr


def _grow(X: np.ndarray, y: np.ndarray, rng: np.random.Generator, hp: ForestHyperparams) -> TreeNode:
    counts = (int(np.sum(y == 0)), int(np.sum(y == 1)))
    node = TreeNode(counts=counts)
    if len(y) < hp.min_leaf or counts[0] == 0 or counts[1] == 0:
        return node
    k = min(hp.max_features, X.shape[1])
    features = rng.choice(X.shape[1], size=k, replace=False)
    split = _gini_best_split(X, y, features)
    if split is None:
        return node
    f, thr = split
    mask = X[:, f] <= thr
    node.feature = f
    node.threshold = thr
    node.left = _grow(X[mask], y[mask], rng, hp)
    node.right = _grow(X[~mask], y[~mask], rng, hp)
    return node


def train_forest(X: np.ndarray, y: np.ndarray, hp: ForestHyperparams) -> ForestModel:
    """Fit the forest; also computes the out-of-bag accuracy.

    Each tree trains on a size-N bootstrap drawn from its own spawned
    Generator, so the model is a pure function of (data, hyperparams).
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    if X.ndim != 2 or len(X) != len(y):
        raise DataError("train_forest expects X (n, d) aligned with y (n,)")
    if not np.all(np.isfinite(X)):
        raise DataError("train_forest requires finite features")
    class_counts = [int(np.sum(y == c)) for c in (0, 1)]
    if min(class_counts) < 2:
        raise DataError(f"need at least 2 samples per class, got {class_counts}")

    n = len(y)
    seeds = np.random.SeedSequence(hp.seed).spawn(hp.n_trees)
    trees: list[TreeNode] = []
    oob_votes = np.zeros((n, 2), dtype=int)
    for seq in seeds:
        rng = np.random.default_rng(seq)
        boot = rng.integers(0, n, size=n)
        tree = _grow(X[boot], y[boot], rng, hp)
        trees.append(tree)
        oob = np.setdiff1d(np.arange(n), boot, assume_unique=False)
        if oob.size:
            pred = _predict_tree_batch(tree, X[oob])
            for i, p in zip(oob, pred):
                oob_votes[i, p] += 1

    covered = oob_votes.sum(axis=1) > 0
    oob_accuracy = None
    if covered.any():
        # Vote tie toward class 0, matching predict_forest.
        oob_pred = (oob_votes[covered, 1] > oob_votes[covered, 0]).astype(int)
        oob_accuracy = float(np.mean(oob_pred == y[covered]))
    return ForestModel(
        trees=trees,
        n_trees=hp.n_trees,
        max_features=hp.max_features,
        min_leaf=hp.min_leaf,
        seed=hp.seed,
        oob_accuracy=oob_accuracy,
    )


def _predict_tree(node: TreeNode, x: np.ndarray) -> int:
    while not node.is_leaf:
        node = node.left if x[node.feature] <= node.threshold else node.right  # type: ignore[assignment]
    return node.leaf_class()


def _predict_tree_batch(node: TreeNode, X: np.ndarray) -> np.ndarray:
    out = np.empty(len(X), dtype=int)
    stack = [(node, np.arange(len(X)))]
    while stack:
        nd, idx = stack.pop()
        if nd.is_leaf:
            out[idx] = nd.leaf_class()
            continue
        mask = X[idx, nd.feature] <= nd.threshold
        stack.append((nd.left, idx[mask]))  # type: ignore[arg-type]
        stack.append((nd.right, idx[~mask]))  # type: ignore[arg-type]
    return out


def predict_forest(model: ForestModel, x: np.ndarray) -> tuple[str, float]:
    """Majority vote over the trees; ties break toward Reading."""
    x = np.asarray(x, dtype=float)
    if x.shape != (N_FEATURES,):
        raise DataError(f"expected a {N_FEATURES}-feature vector, got shape {x.shape}")
    votes = [0, 0]
    for tree in model.trees:
        votes[_predict_tree(tree, x)] += 1
    pred = 0 if votes[0] >= votes[1] else 1
    return LABELS[pred], votes[pred] / len(model.trees)


def predict_forest_batch(model: ForestModel, X: np.ndarray) -> np.ndarray:
    """Class ids for many vectors at once (same vote rule as predict_forest)."""
    X = np.asarray(X, dtype=float)
    votes = np.zeros((len(X), 2), dtype=int)
    for tree in model.trees:
        pred = _predict_tree_batch(tree, X)
        votes[np.arange(len(X)), pred] += 1
    return (votes[:, 1] > votes[:, 0]).astype(int)


def _node_preorder(node: TreeNode, out: list[list]) -> None:
    out.append([node.feature, node.threshold, node.counts[0], node.counts[1]])
    if not node.is_leaf:
        _node_preorder(node.left, out)  # type: ignore[arg-type]
        _node_preorder(node.right, out)  # type: ignore[arg-type]


def forest_to_dict(model: ForestModel) -> dict:
    """Portable form: one preorder node list per tree."""
    trees = []
    for tree in model.trees:
        nodes: list[list] = []
        _node_preorder(tree, nodes)
        trees.append(nodes)
    return {
        "kind": "forest",
        "n_trees": model.n_trees,
        "max_features": model.max_features,
        "min_leaf": model.min_leaf,
        "seed": model.seed,
        "oob_accuracy": model.oob_accuracy,
        "classes": list(LABELS),
        "trees": trees,
    }


def _node_from_preorder(nodes: list[list], pos: list[int]) -> TreeNode:
    feature, threshold, c0, c1 = nodes[pos[0]]
    pos[0] += 1
    node = TreeNode(feature=feature, threshold=threshold, counts=(c0, c1))
    if feature >= 0:
        node.left = _node_from_preorder(nodes, pos)
        node.right = _node_from_preorder(nodes, pos)
    return node


def forest_from_dict(data: dict) -> ForestModel:
    if data.get("kind") != "forest":
        raise DataError("not a serialized forest model")
    trees = [_node_from_preorder(nodes, [0]) for nodes in data["trees"]]
    return ForestModel(
        trees=trees,
        n_trees=data["n_trees"],
        max_features=data["max_features"],
        min_leaf=data["min_leaf"],
        seed=data["seed"],
        oob_accuracy=data["oob_accuracy"],
    )
