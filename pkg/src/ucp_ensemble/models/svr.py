"""Epsilon-insensitive support vector regression with a Gaussian kernel.

The dual problem is solved by the pairwise coordinate-descent kernel in
``ucp_ensemble._kernels`` (compiled when available).  Inputs are scaled to
[0, 1] by the fixed rating range; the kernel width is 1/dimension on that
scale.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import _kernels
from .common import ModelConfig, TrainedModel, training_fingerprint, validate_training_inputs

_RATING_SCALE = 5.0


def _kernel_matrix(A: np.ndarray, B: np.ndarray, gamma: float) -> np.ndarray:
    sq = np.sum(A**2, axis=1)[:, None] + np.sum(B**2, axis=1)[None, :] - 2.0 * (A @ B.T)
    return np.exp(-gamma * np.maximum(sq, 0.0))


@dataclass(frozen=True, eq=False)
class TrainedSVR(TrainedModel):
    support: np.ndarray  # scaled support vectors
    beta: np.ndarray
    bias: float
    gamma: float
    epsilon: float

    def _predict_raw(self, X: np.ndarray) -> np.ndarray:
        Xs = X / _RATING_SCALE
        return _kernel_matrix(Xs, self.support, self.gamma) @ self.beta + self.bias

    def _params(self) -> dict:
        return {
            "support": self.support.tolist(),
            "beta": self.beta.tolist(),
            "bias": self.bias,
            "gamma": self.gamma,
            "epsilon": self.epsilon,
        }

    @classmethod
    def _from_params(cls, model_id, fingerprint, params):
        return cls(model_id, fingerprint,
                   np.asarray(params["support"], dtype=float),
                   np.asarray(params["beta"], dtype=float),
                   float(params["bias"]), float(params["gamma"]), float(params["epsilon"]))


def train_svr(X, y, config: ModelConfig) -> TrainedSVR:
    X, y = validate_training_inputs(X, y)
    Xs = X / _RATING_SCALE
    epsilon = config.svr_epsilon
    if epsilon is None:
        epsilon = 0.1 * float(np.std(y, ddof=1))
    K = _kernel_matrix(Xs, Xs, config.svr_gamma)
    beta, bias = _kernels.svr_smo(K, y, config.svr_c, epsilon, config.svr_tol, config.svr_max_iter)
    beta = np.asarray(beta, dtype=float)
    keep = np.abs(beta) > 1e-10  # may be empty: constant target inside the tube
    return TrainedSVR("SVR", training_fingerprint(X, y),
                      Xs[keep].copy(), beta[keep].copy(), float(bias),
                      config.svr_gamma, float(epsilon))
