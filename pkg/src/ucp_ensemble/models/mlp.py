"""One-hidden-layer tanh perceptron trained by full-batch gradient descent.

Inputs are scaled to [0, 1] by the fixed rating range; targets are
standardized during training and de-standardized at prediction.  The training
loop runs in the selected kernel backend; `loss_and_grad` is the analytic
gradient used both for documentation of the math and for the finite-difference
gradient check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import _kernels
from .common import ModelConfig, TrainedModel, training_fingerprint, validate_training_inputs

_RATING_SCALE = 5.0


def init_params(n_inputs: int, config: ModelConfig) -> tuple:
    """Seeded uniform [-0.5, 0.5] initialization for (w1, b1, w2, b2)."""
    rng = np.random.default_rng(config.seed)
    w1 = rng.uniform(-0.5, 0.5, size=(n_inputs, config.mlp_hidden))
    b1 = rng.uniform(-0.5, 0.5, size=config.mlp_hidden)
    w2 = rng.uniform(-0.5, 0.5, size=config.mlp_hidden)
    b2 = float(rng.uniform(-0.5, 0.5))
    return w1, b1, w2, b2


def loss_and_grad(Xs: np.ndarray, ys: np.ndarray, w1, b1, w2, b2) -> tuple:
    """Mean-squared-error loss and its analytic gradient (backpropagation)."""
    n = Xs.shape[0]
    h = np.tanh(Xs @ w1 + b1)
    pred = h @ w2 + b2
    resid = pred - ys
    loss = float(np.mean(resid**2))
    r = (2.0 / n) * resid
    gw2 = h.T @ r
    gb2 = float(np.sum(r))
    dh = np.outer(r, w2) * (1.0 - h * h)
    gw1 = Xs.T @ dh
    gb1 = dh.sum(axis=0)
    return loss, (gw1, gb1, gw2, gb2)


@dataclass(frozen=True, eq=False)
class TrainedMLP(TrainedModel):
    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: float
    y_mean: float
    y_scale: float

    def _predict_raw(self, X: np.ndarray) -> np.ndarray:
        h = np.tanh((X / _RATING_SCALE) @ self.w1 + self.b1)
        return (h @ self.w2 + self.b2) * self.y_scale + self.y_mean

    def _params(self) -> dict:
        return {
            "w1": self.w1.tolist(), "b1": self.b1.tolist(),
            "w2": self.w2.tolist(), "b2": self.b2,
            "y_mean": self.y_mean, "y_scale": self.y_scale,
        }

    @classmethod
    def _from_params(cls, model_id, fingerprint, params):
        return cls(model_id, fingerprint,
                   np.asarray(params["w1"], dtype=float),
                   np.asarray(params["b1"], dtype=float),
                   np.asarray(params["w2"], dtype=float),
                   float(params["b2"]), float(params["y_mean"]), float(params["y_scale"]))


def _standardize(y: np.ndarray) -> tuple:
    mean = float(np.mean(y))
    scale = float(np.std(y))
    if scale == 0.0:
        scale = 1.0
    return (y - mean) / scale, mean, scale


def train_mlp(X, y, config: ModelConfig) -> TrainedMLP:
    X, y = validate_training_inputs(X, y)
    Xs = X / _RATING_SCALE
    ys, y_mean, y_scale = _standardize(y)
    w1, b1, w2, b2 = init_params(X.shape[1], config)
    b2 = _kernels.mlp_train(Xs, ys, w1, b1, w2, b2, config.mlp_lr, config.mlp_epochs)
    return TrainedMLP("MLP", training_fingerprint(X, y), w1, b1, w2, float(b2), y_mean, y_scale)
