"""Shared contract for the seven base productivity regressors.

Every family trains from an (n x 8) matrix of environmental ratings and a
positive productivity vector, and predicts a finite productivity clamped to a
physical floor of 1 hour/UCP.  Trained models are immutable, deterministic
given the training seed, and serializable to a versioned JSON document.
"""

from __future__ import annotations

import hashlib
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from ..dataset import EnvFactors, N_FACTORS

MODEL_IDS = ("MLR", "SR", "RT", "SVR", "MLP", "RBF", "FUZZY")

PRODUCTIVITY_FLOOR = 1.0  # hours/UCP; below this Eq-style effort conversion is meaningless

MODEL_FORMAT = "ucp-ensemble-model"
MODEL_FORMAT_VERSION = 1


class TrainingError(RuntimeError):
    """A model family could not be trained on the given data."""


@dataclass(frozen=True)
class ModelConfig:
    """Hyperparameters for all families plus the training seed.

    The defaults are sized for desk-scale project datasets (tens of records);
    none of them come from the original study, which specifies no
    hyperparameters at all.
    """

    seed: int = 0
    # MLR
    mlr_condition_limit: float = 1e10
    mlr_ridge: float = 1e-6
    # stepwise regression
    sr_entry_p: float = 0.05
    sr_exit_p: float = 0.10
    # regression tree
    rt_max_depth: int = 4
    rt_min_leaf: int = 2
    # support vector regression
    svr_c: float = 100.0
    svr_gamma: float = 0.125  # 1 / input dimension
    svr_epsilon: Optional[float] = None  # None -> 0.1 * stdev(y)
    svr_tol: float = 1e-4
    svr_max_iter: int = 10_000
    # multilayer perceptron
    mlp_hidden: int = 8
    mlp_lr: float = 0.01
    mlp_epochs: int = 5000
    # radial basis function network
    rbf_centers: Optional[int] = None  # None -> min(n, 10)
    rbf_ridge: float = 1e-8
    rbf_kmeans_iters: int = 20

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ModelConfig":
        return cls(**d)


def as_env_matrix(X) -> np.ndarray:
    """Accept an (n, 8) array or a sequence of EnvFactors; return the matrix."""
    if isinstance(X, np.ndarray):
        arr = np.asarray(X, dtype=float)
    else:
        X = list(X)
        if X and isinstance(X[0], EnvFactors):
            arr = np.array([e.ratings for e in X], dtype=float)
        else:
            arr = np.asarray(X, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.shape[1] != N_FACTORS:
        raise ValueError(f"expected {N_FACTORS} factor columns, got {arr.shape[1]}")
    return arr


def training_fingerprint(X: np.ndarray, y: np.ndarray) -> str:
    h = hashlib.sha256()
    h.update(np.ascontiguousarray(X, dtype=float).tobytes())
    h.update(np.ascontiguousarray(y, dtype=float).tobytes())
    return h.hexdigest()


@dataclass(frozen=True, eq=False)
class TrainedModel:
    model_id: str
    fingerprint: str

    def _predict_raw(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def predict_many(self, X) -> np.ndarray:
        """Clamped productivity predictions for an (n, 8) matrix."""
        out = np.asarray(self._predict_raw(as_env_matrix(X)), dtype=float)
        return np.maximum(out, PRODUCTIVITY_FLOOR)

    def predict(self, env: Union[EnvFactors, Sequence[float]]) -> float:
        if isinstance(env, EnvFactors):
            env = env.as_array()
        return float(self.predict_many(np.asarray(env, dtype=float).reshape(1, -1))[0])

    def _params(self) -> dict:
        raise NotImplementedError

    def to_json(self) -> dict:
        return {
            "format": MODEL_FORMAT,
            "version": MODEL_FORMAT_VERSION,
            "family": self.model_id,
            "fingerprint": self.fingerprint,
            "params": self._params(),
        }


def validate_training_inputs(X, y) -> tuple:
    X = as_env_matrix(X)
    y = np.asarray(y, dtype=float)
    if X.shape[0] != y.size:
        raise TrainingError("X and y length mismatch")
    if y.size < 3:
        raise TrainingError("training needs at least 3 records")
    if not np.all(np.isfinite(X)) or not np.all(np.isfinite(y)):
        raise TrainingError("non-finite training values")
    if not np.all(y > 0):
        raise TrainingError("productivity targets must be positive")
    return X, y
