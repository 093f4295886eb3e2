"""Walkthrough: the from-scratch MLP (ReLU, softmax, Adam, early stopping).

Trains the classifier on a small three-class problem, prints the
validation trace to show early stopping, and verifies the analytic
gradients against central finite differences on the spot.
"""

import numpy as np

from figstyle.mlp import MLPModel, TrainConfig, loss_and_grads, predict, train

rng = np.random.default_rng(0)

# three Gaussian blobs in 6 dimensions
centers = rng.normal(scale=2.0, size=(3, 6))
X = np.vstack([center + rng.normal(scale=0.5, size=(60, 6)) for center in centers])
y = [f"class{i}" for i in range(3) for _ in range(60)]

config = TrainConfig(
    hidden_units=32,
    learning_rate=0.02,
    max_epochs=300,
    patience=15,
    seed=4,
)
model, report = train(X, y, config, feature_spec="blobs(6)")

print("=== training report ===")
print(f"epochs run      : {report['epochs_run']} (early stop: {report['stopped_early']})")
print(f"best epoch      : {report['best_epoch']} with validation accuracy {report['best_val_score']:.3f}")
trace = ", ".join(f"{s:.2f}" for s in report["val_scores"][:12])
print(f"validation trace: {trace}, ...")

pred, probs = predict(model, X)
accuracy = float(np.mean(np.array(pred) == np.array(y)))
print(f"train accuracy  : {accuracy:.3f}")
print(f"probability rows sum to 1 within {np.abs(probs.sum(axis=1) - 1).max():.1e}")

print("\n=== analytic vs numeric gradients (spot check) ===")
small = MLPModel(
    W1=rng.normal(scale=0.5, size=(4, 5)),
    b1=np.zeros(5),
    W2=rng.normal(scale=0.5, size=(5, 3)),
    b2=np.zeros(3),
    class_index=["a", "b", "c"],
)
Xs = rng.normal(size=(8, 4))
ys = np.eye(3)[rng.integers(0, 3, size=8)]
_, grads = loss_and_grads(small, Xs, ys)

step = 1e-5
worst = 0.0
for name, param in small.params().items():
    flat = param.reshape(-1)
    for idx in range(flat.size):
        orig = flat[idx]
        flat[idx] = orig + step
        hi, _ = loss_and_grads(small, Xs, ys)
        flat[idx] = orig - step
        lo, _ = loss_and_grads(small, Xs, ys)
        flat[idx] = orig
        numeric = (hi - lo) / (2 * step)
        analytic = grads[name].reshape(-1)[idx]
        denom = max(abs(analytic) + abs(numeric), 1e-6)
        worst = max(worst, abs(analytic - numeric) / denom)
print(f"worst relative error over every parameter: {worst:.2e}")
