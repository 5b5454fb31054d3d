"""Single-hidden-layer perceptron trained with Adam on MSE loss.

Architecture is fixed by contract: 16 inputs -> 32 ReLU units -> 1 sigmoid
output. Inputs are standardized with train-set statistics only. Training
is bit-reproducible given (seed, hyperparams, dataset order).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DataError, NumericError
from ..features import LABELS

N_INPUT = 16
N_HIDDEN = 32

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8


@dataclass
class MlpHyperparams:
    epochs: int = 200
    batch_size: int = 32
    learning_rate: float = 0.001
    seed: int = 0


@dataclass
class StandardizerParams:
    mean: np.ndarray  # (16,)
    std: np.ndarray  # (16,), population std with 1.0 for constant features
    constant_mask: np.ndarray  # (16,) bool


def fit_standardizer(X: np.ndarray) -> StandardizerParams:
    """Per-feature mean/std from the training split only.

    Constant features are flagged and passed through centered (their
    divisor is forced to 1) instead of dividing by zero.
    """
    X = np.asarray(X, dtype=float)
    mean = X.mean(axis=0)
    std = X.std(axis=0)  # population
    constant = std == 0.0
    safe = std.copy()
    safe[constant] = 1.0
    return StandardizerParams(mean=mean, std=safe, constant_mask=constant)


def apply_standardizer(params: StandardizerParams, X: np.ndarray) -> np.ndarray:
    return (np.asarray(X, dtype=float) - params.mean) / params.std


@dataclass
class MlpModel:
    W1: np.ndarray  # (32, 16)
    b1: np.ndarray  # (32,)
    w2: np.ndarray  # (32,)
    b2: float

    def params(self) -> list[np.ndarray]:
        return [self.W1, self.b1, self.w2, np.array([self.b2])]


@dataclass
class AdamState:
    """First/second moment estimates for one parameter array."""

    m: np.ndarray
    v: np.ndarray
    t: int = 0


def adam_step(
    param: np.ndarray,
    grad: np.ndarray,
    state: AdamState,
    lr: float = 0.001,
    beta1: float = ADAM_BETA1,
    beta2: float = ADAM_BETA2,
    eps: float = ADAM_EPS,
) -> np.ndarray:
    """One Adam update with bias correction; returns the new parameter."""
    state.t += 1
    state.m = beta1 * state.m + (1.0 - beta1) * grad
    state.v = beta2 * state.v + (1.0 - beta2) * grad**2
    m_hat = state.m / (1.0 - beta1**state.t)
    v_hat = state.v / (1.0 - beta2**state.t)
    return param - lr * m_hat / (np.sqrt(v_hat) + eps)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def init_mlp(seed: int) -> MlpModel:
    """Uniform init scaled by 1/sqrt(fan_in); biases start at zero."""
    rng = np.random.default_rng(seed)
    s1 = 1.0 / np.sqrt(N_INPUT)
    s2 = 1.0 / np.sqrt(N_HIDDEN)
    return MlpModel(
        W1=rng.uniform(-s1, s1, size=(N_HIDDEN, N_INPUT)),
        b1=np.zeros(N_HIDDEN),
        w2=rng.uniform(-s2, s2, size=N_HIDDEN),
        b2=0.0,
    )


def forward(model: MlpModel, Xs: np.ndarray) -> np.ndarray:
    """Sigmoid scores for standardized inputs Xs (n, 16)."""
    H = np.maximum(0.0, Xs @ model.W1.T + model.b1)
    return _sigmoid(H @ model.w2 + model.b2)


def loss_and_gradients(
    model: MlpModel, Xs: np.ndarray, t: np.ndarray
) -> tuple[float, dict[str, np.ndarray]]:
    """MSE loss and its gradients for one (standardized) batch.

    loss = mean((y - t)^2) with t in {0, 1}.
    """
    n = len(Xs)
    Z1 = Xs @ model.W1.T + model.b1  # (n, 32)
    H = np.maximum(0.0, Z1)
    z2 = H @ model.w2 + model.b2  # (n,)
    y = _sigmoid(z2)
    diff = y - t
    loss = float(np.mean(diff**2))

    dz2 = (2.0 / n) * diff * y * (1.0 - y)  # (n,)
    grads = {
        "w2": H.T @ dz2,
        "b2": np.array([np.sum(dz2)]),
    }
    dH = np.outer(dz2, model.w2)  # (n, 32)
    dZ1 = dH * (Z1 > 0)
    grads["W1"] = dZ1.T @ Xs
    grads["b1"] = dZ1.sum(axis=0)
    return loss, grads


def train_mlp(
    X: np.ndarray,
    y: np.ndarray,
    hp: MlpHyperparams,
) -> tuple[MlpModel, StandardizerParams, list[float]]:
    """Train on (X, y); returns the model, train-only standardizer, and the
    per-epoch training-loss curve."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    if X.ndim != 2 or X.shape[1] != N_INPUT:
        raise DataError(f"train_mlp expects (n, {N_INPUT}) features, got {X.shape}")
    if len(X) != len(y):
        raise DataError("features and labels are misaligned")

    std_params = fit_standardizer(X)
    Xs = apply_standardizer(std_params, X)
    t = y.astype(float)

    model = init_mlp(hp.seed)
    rng = np.random.default_rng(np.random.SeedSequence(hp.seed).spawn(1)[0])
    states = {
        "W1": AdamState(np.zeros_like(model.W1), np.zeros_like(model.W1)),
        "b1": AdamState(np.zeros_like(model.b1), np.zeros_like(model.b1)),
        "w2": AdamState(np.zeros_like(model.w2), np.zeros_like(model.w2)),
        "b2": AdamState(np.zeros(1), np.zeros(1)),
    }
    losses: list[float] = []
    n = len(Xs)
    for _ in range(hp.epochs):
        order = rng.permutation(n)
        for lo in range(0, n, hp.batch_size):
            idx = order[lo : lo + hp.batch_size]
            loss, grads = loss_and_gradients(model, Xs[idx], t[idx])
            if not np.isfinite(loss):
                raise NumericError(f"training diverged: batch loss {loss}")
            model.W1 = adam_step(model.W1, grads["W1"], states["W1"], hp.learning_rate)
            model.b1 = adam_step(model.b1, grads["b1"], states["b1"], hp.learning_rate)
            model.w2 = adam_step(model.w2, grads["w2"], states["w2"], hp.learning_rate)
            model.b2 = float(
                adam_step(np.array([model.b2]), grads["b2"], states["b2"], hp.learning_rate)[0]
            )
        epoch_loss = float(np.mean((forward(model, Xs) - t) ** 2))
        if not np.isfinite(epoch_loss):
            raise NumericError(f"training diverged: epoch loss {epoch_loss}")
        losses.append(epoch_loss)
    return model, std_params, losses


def predict_mlp(
    model: MlpModel,
    std_params: StandardizerParams,
    X: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """(class ids, sigmoid scores); score > 0.5 reads as VideoWatching."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    scores = forward(model, apply_standardizer(std_params, X))
    return (scores > 0.5).astype(int), scores


def predict_mlp_label(
    model: MlpModel, std_params: StandardizerParams, x: np.ndarray
) -> tuple[str, float]:
    pred, score = predict_mlp(model, std_params, x)
    return LABELS[int(pred[0])], float(score[0])


def mlp_to_dict(model: MlpModel, std_params: StandardizerParams) -> dict:
    """Portable form: layer dimensions plus flat parameter lists."""
    return {
        "kind": "mlp",
        "n_input": N_INPUT,
        "n_hidden": N_HIDDEN,
        "W1": model.W1.tolist(),
        "b1": model.b1.tolist(),
        "w2": model.w2.tolist(),
        "b2": model.b2,
        "standardizer": {
            "mean": std_params.mean.tolist(),
            "std": std_params.std.tolist(),
            "constant_mask": [bool(v) for v in std_params.constant_mask],
        },
    }


def mlp_from_dict(data: dict) -> tuple[MlpModel, StandardizerParams]:
    if data.get("kind") != "mlp":
        raise DataError("not a serialized MLP model")
    if data["n_input"] != N_INPUT or data["n_hidden"] != N_HIDDEN:
        raise DataError("MLP dimensions do not match the 16->32->1 contract")
    model = MlpModel(
        W1=np.array(data["W1"], dtype=float),
        b1=np.array(data["b1"], dtype=float),
        w2=np.array(data["w2"], dtype=float),
        b2=float(data["b2"]),
    )
    std = StandardizerParams(
        mean=np.array(data["standardizer"]["mean"], dtype=float),
        std=np.array(data["standardizer"]["std"], dtype=float),
        constant_mask=np.array(data["standardizer"]["constant_mask"], dtype=bool),
    )
    return model, std
