"""Single-hidden-layer MLP classifier, implemented from scratch in numpy.

Architecture: dense -> ReLU -> dense -> softmax, trained with mini-batch
Adam on mean cross-entropy. Training holds out a stratified validation
fraction and early-stops when the validation accuracy fails to improve
by `tolerance` for `patience` consecutive epochs; the returned parameters
are those of the best validation epoch.

Everything runs in float64 and is deterministic given (data, config,
seed): initialization is seeded Glorot-uniform, shuffling and the
validation split use the same generator, and serialization via
model.json preserves exact float values (repr round-trip).
"""

import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError

__all__ = [
    "MLPModel",
    "TrainConfig",
    "AdamState",
    "forward",
    "loss_and_grads",
    "adam_step",
    "train",
    "predict",
    "save_model",
    "load_model",
]


@dataclass
class TrainConfig:
    hidden_units: int = 1024
    learning_rate: float = 2e-5
    max_epochs: int = 1000
    validation_fraction: float = 0.1
    patience: int = 10
    tolerance: float = 1e-4
    batch_size: int = 0  # 0 means min(200, n_train)
    seed: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    standardize: bool = False

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise DataError("learning_rate must be positive")
        if not 0.0 < self.validation_fraction < 1.0:
            raise DataError("validation_fraction must lie in (0, 1)")
        if self.patience < 1:
            raise DataError("patience must be at least 1")
        if self.hidden_units < 1:
            raise DataError("hidden_units must be at least 1")
        if self.max_epochs < 1:
            raise DataError("max_epochs must be at least 1")


@dataclass
class MLPModel:
    """Network parameters plus the label order used by predict."""

    W1: np.ndarray
    b1: np.ndarray
    W2: np.ndarray
    b2: np.ndarray
    class_index: list
    feature_spec: str = ""
    mean: np.ndarray = None  # set when the config standardized inputs
    std: np.ndarray = None

    def __post_init__(self):
        if len(self.class_index) < 2:
            raise DataError("classifier needs at least two classes")
        for name, p in self.params().items():
            if not np.all(np.isfinite(p)):
                raise DataError(f"non-finite parameter {name}")

    @property
    def input_dim(self):
        return self.W1.shape[0]

    @property
    def hidden_units(self):
        return self.W1.shape[1]

    @property
    def n_classes(self):
        return self.W2.shape[1]

    def params(self):
        return {"W1": self.W1, "b1": self.b1, "W2": self.W2, "b2": self.b2}

    def replace_params(self, params):
        self.W1 = params["W1"]
        self.b1 = params["b1"]
        self.W2 = params["W2"]
        self.b2 = params["b2"]


@dataclass
class AdamState:
    """First/second moment accumulators, keyed like the parameter dict."""

    m: dict = field(default_factory=dict)
    v: dict = field(default_factory=dict)

    @classmethod
    def zeros_like(cls, params):
        return cls(
            m={k: np.zeros_like(p) for k, p in params.items()},
            v={k: np.zeros_like(p) for k, p in params.items()},
        )


def _softmax(logits):
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def _apply_standardization(model, X):
    if model.mean is not None:
        return (X - model.mean) / model.std
    return X


def forward(model, X):
    """Hidden activations and class probabilities for a batch.

    h = relu(X W1 + b1), p = softmax(h W2 + b2); each probability row
    sums to 1 within 1e-12.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.input_dim:
        raise DataError(
            f"input width {X.shape[-1] if X.ndim else '?'} does not match "
            f"model input dimension {model.input_dim}"
        )
    X = _apply_standardization(model, X)
    h = np.maximum(X @ model.W1 + model.b1, 0.0)
    probs = _softmax(h @ model.W2 + model.b2)
    return h, probs


def loss_and_grads(model, X, y_onehot):
    """Mean cross-entropy and its gradients for every parameter.

    Standard backpropagation through softmax cross-entropy, ReLU treated
    as having zero derivative at exactly zero.
    """
    X = np.asarray(X, dtype=np.float64)
    y_onehot = np.asarray(y_onehot, dtype=np.float64)
    n = X.shape[0]
    Xs = _apply_standardization(model, X)
    z1 = Xs @ model.W1 + model.b1
    h = np.maximum(z1, 0.0)
    probs = _softmax(h @ model.W2 + model.b2)
    true_p = (probs * y_onehot).sum(axis=1)
    loss = float(-np.mean(np.log(np.maximum(true_p, 1e-300))))
    if not math.isfinite(loss):
        raise DataError(f"non-finite loss on batch of {n} rows")
    dlogits = (probs - y_onehot) / n
    grads = {
        "W2": h.T @ dlogits,
        "b2": dlogits.sum(axis=0),
    }
    dh = dlogits @ model.W2.T
    dh[z1 <= 0.0] = 0.0
    grads["W1"] = Xs.T @ dh
    grads["b1"] = dh.sum(axis=0)
    return loss, grads


def adam_step(params, grads, state, t, config):
    """One bias-corrected Adam update; returns (new_params, new_state)."""
    if t < 1:
        raise DataError("Adam step counter starts at 1")
    new_params = {}
    new_m = {}
    new_v = {}
    for key, p in params.items():
        g = grads[key]
        m = config.beta1 * state.m[key] + (1.0 - config.beta1) * g
        v = config.beta2 * state.v[key] + (1.0 - config.beta2) * g * g
        m_hat = m / (1.0 - config.beta1 ** t)
        v_hat = v / (1.0 - config.beta2 ** t)
        new_params[key] = p - config.learning_rate * m_hat / (
            np.sqrt(v_hat) + config.eps
        )
        new_m[key] = m
        new_v[key] = v
    return new_params, AdamState(m=new_m, v=new_v)


def _glorot(rng, fan_in, fan_out):
    limit = math.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


def _validation_split(y_idx, fraction, rng):
    """Stratified holdout indices; non-stratified fallback for tiny classes."""
    n = len(y_idx)
    counts = np.bincount(y_idx)
    if counts.min() < 2:
        warnings.warn(
            "a class has fewer than 2 samples; validation holdout is "
            "not stratified"
        )
        order = rng.permutation(n)
        n_val = min(max(math.floor(fraction * n + 0.5), 1), n - 1)
        val = order[:n_val]
    else:
        val = []
        for cls in range(len(counts)):
            members = np.flatnonzero(y_idx == cls)
            order = rng.permutation(len(members))
            n_val = min(
                max(math.floor(fraction * len(members) + 0.5), 0),
                len(members) - 1,
            )
            val.extend(members[order[:n_val]])
        if not val:
            biggest = int(np.argmax(counts))
            members = np.flatnonzero(y_idx == biggest)
            val = [members[rng.integers(len(members))]]
        val = np.array(sorted(val))
    mask = np.ones(n, dtype=bool)
    mask[val] = False
    return np.flatnonzero(mask), np.asarray(val)


def train(X, y, config, feature_spec=""):
    """Train the classifier; returns (model at best validation epoch, report).

    Deterministic given (X, y, config): the validation split, parameter
    initialization, and epoch shuffles all derive from config.seed.
    """
    X = np.asarray(X, dtype=np.float64)
    y = list(y)
    if X.ndim != 2 or X.shape[0] != len(y):
        raise DataError("X must be 2-D with one row per label")
    class_index = sorted(set(y))
    if len(class_index) < 2:
        raise DataError("training needs at least two classes")
    cls_pos = {c: i for i, c in enumerate(class_index)}
    y_idx = np.array([cls_pos[label] for label in y], dtype=np.int64)

    mean = std = None
    if config.standardize:
        mean = X.mean(axis=0)
        std = X.std(axis=0)
        std = np.where(std == 0.0, 1.0, std)

    rng = np.random.default_rng(config.seed)
    train_idx, val_idx = _validation_split(
        y_idx, config.validation_fraction, rng
    )
    n_train = len(train_idx)
    k = len(class_index)
    model = MLPModel(
        W1=_glorot(rng, X.shape[1], config.hidden_units),
        b1=np.zeros(config.hidden_units),
        W2=_glorot(rng, config.hidden_units, k),
        b2=np.zeros(k),
        class_index=class_index,
        feature_spec=feature_spec,
        mean=mean,
        std=std,
    )
    onehot = np.eye(k)[y_idx]
    batch_size = config.batch_size if config.batch_size > 0 else min(200, n_train)
    state = AdamState.zeros_like(model.params())
    t = 0
    best_score = -np.inf
    best_params = {k_: p.copy() for k_, p in model.params().items()}
    best_epoch = 0
    no_improvement = 0
    val_scores = []
    last_loss = float("nan")
    X_val, y_val = X[val_idx], y_idx[val_idx]

    for epoch in range(1, config.max_epochs + 1):
        order = rng.permutation(n_train)
        for start in range(0, n_train, batch_size):
            batch = train_idx[order[start : start + batch_size]]
            last_loss, grads = loss_and_grads(model, X[batch], onehot[batch])
            t += 1
            new_params, state = adam_step(
                model.params(), grads, state, t, config
            )
            model.replace_params(new_params)
        _, val_probs = forward(model, X_val)
        score = float(np.mean(np.argmax(val_probs, axis=1) == y_val))
        val_scores.append(score)
        if score < best_score + config.tolerance:
            no_improvement += 1
        else:
            no_improvement = 0
        if score > best_score:
            best_score = score
            best_epoch = epoch
            best_params = {k_: p.copy() for k_, p in model.params().items()}
        if no_improvement >= config.patience:
            break

    model.replace_params(best_params)
    report = {
        "epochs_run": len(val_scores),
        "best_epoch": best_epoch,
        "best_val_score": best_score,
        "val_scores": val_scores,
        "final_train_loss": last_loss,
        "stopped_early": len(val_scores) < config.max_epochs,
        "n_train": int(n_train),
        "n_val": int(len(val_idx)),
    }
    return model, report


def predict(model, X):
    """Predicted labels and probabilities; argmax ties go to the lower index."""
    _, probs = forward(model, X)
    labels = [model.class_index[i] for i in np.argmax(probs, axis=1)]
    return labels, probs


def save_model(model, report, path):
    """Serialize to model.json with exact float values."""
    payload = {
        "class_index": model.class_index,
        "feature_spec": model.feature_spec,
        "dims": {
            "input": int(model.input_dim),
            "hidden": int(model.hidden_units),
            "classes": int(model.n_classes),
        },
        "W1": model.W1.tolist(),
        "b1": model.b1.tolist(),
        "W2": model.W2.tolist(),
        "b2": model.b2.tolist(),
        "standardize": (
            None
            if model.mean is None
            else {"mean": model.mean.tolist(), "std": model.std.tolist()}
        ),
        "train_report": report,
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle)
        handle.write("\n")


def load_model(path):
    """Inverse of save_model; returns (model, report)."""
    with open(path, "r", encoding="utf-8") as handle:
        payload = json.load(handle)
    try:
        standardize = payload["standardize"]
        model = MLPModel(
            W1=np.array(payload["W1"], dtype=np.float64),
            b1=np.array(payload["b1"], dtype=np.float64),
            W2=np.array(payload["W2"], dtype=np.float64),
            b2=np.array(payload["b2"], dtype=np.float64),
            class_index=payload["class_index"],
            feature_spec=payload["feature_spec"],
            mean=(
                None
                if standardize is None
                else np.array(standardize["mean"], dtype=np.float64)
            ),
            std=(
                None
                if standardize is None
                else np.array(standardize["std"], dtype=np.float64)
            ),
        )
        report = payload["train_report"]
    except KeyError as exc:
        raise DataError(f"{path}: malformed model file (missing {exc})")
    return model, report
