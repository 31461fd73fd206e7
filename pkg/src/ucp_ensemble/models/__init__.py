"""The seven base productivity regressors behind one train/predict contract."""

from __future__ import annotations

import numpy as np

from .common import (
    MODEL_FORMAT,
    MODEL_FORMAT_VERSION,
    MODEL_IDS,
    PRODUCTIVITY_FLOOR,
    ModelConfig,
    TrainedModel,
    TrainingError,
    as_env_matrix,
    validate_training_inputs,
)
from . import mlp as _mlp_mod
from . import rbf as _rbf_mod
from .fuzzy import TrainedFuzzy, train_fuzzy
from .linear import TrainedLinear, train_mlr, train_sr
from .mlp import TrainedMLP, train_mlp
from .rbf import TrainedRBF, train_rbf
from .svr import TrainedSVR, train_svr
from .tree import TrainedTree, train_rt

TRAINERS = {
    "MLR": train_mlr,
    "SR": train_sr,
    "RT": train_rt,
    "SVR": train_svr,
    "MLP": train_mlp,
    "RBF": train_rbf,
    "FUZZY": train_fuzzy,
}

_CLASSES = {
    "MLR": TrainedLinear,
    "SR": TrainedLinear,
    "RT": TrainedTree,
    "SVR": TrainedSVR,
    "MLP": TrainedMLP,
    "RBF": TrainedRBF,
    "FUZZY": TrainedFuzzy,
}


def train(model_id: str, X, y, config: ModelConfig) -> TrainedModel:
    """Train one family on environmental ratings X and productivity targets y."""
    if model_id not in TRAINERS:
        raise TrainingError(f"unknown model family {model_id!r}")
    return TRAINERS[model_id](X, y, config)


def model_from_json(doc: dict) -> TrainedModel:
    if doc.get("format") != MODEL_FORMAT:
        raise ValueError("not a trained-model document")
    if doc.get("version") != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model document version {doc.get('version')!r}")
    family = doc["family"]
    if family not in _CLASSES:
        raise ValueError(f"unknown model family {family!r}")
    return _CLASSES[family]._from_params(family, doc["fingerprint"], doc["params"])


def _flatten(parts) -> np.ndarray:
    return np.concatenate([np.atleast_1d(np.asarray(p, dtype=float)).ravel() for p in parts])


def check_gradient(model_id: str, X, y, config: ModelConfig, step: float = 1e-5) -> float:
    """Analytic training gradient vs central finite differences.

    Evaluated at the seeded parameter initialization (MLP) or at a seeded
    output-weight vector over the fitted basis (RBF).  Returns the maximum
    relative deviation over all parameters.
    """
    X, y = validate_training_inputs(X, y)
    if model_id == "MLP":
        Xs = X / 5.0
        ys, _, _ = _mlp_mod._standardize(y)
        w1, b1, w2, b2 = _mlp_mod.init_params(X.shape[1], config)
        shapes = [w1.shape, b1.shape, w2.shape, ()]
        theta0 = _flatten([w1, b1, w2, b2])

        def unpack(theta):
            out, pos = [], 0
            for shp in shapes:
                size = int(np.prod(shp)) if shp else 1
                chunk = theta[pos:pos + size]
                out.append(float(chunk[0]) if shp == () else chunk.reshape(shp))
                pos += size
            return out

        def loss(theta):
            return _mlp_mod.loss_and_grad(Xs, ys, *unpack(theta))[0]

        _, grads = _mlp_mod.loss_and_grad(Xs, ys, w1, b1, w2, b2)
        analytic = _flatten(grads)
    elif model_id == "RBF":
        _, centers, widths = _rbf_mod._basis(X, config)
        rng = np.random.default_rng(config.seed)
        theta0 = rng.uniform(-0.5, 0.5, size=len(centers) + 1)

        def loss(theta):
            return _rbf_mod.loss_and_grad(X, y, theta, config)[0]

        _, analytic = _rbf_mod.loss_and_grad(X, y, theta0, config)
    else:
        raise ValueError("gradient check supports only MLP and RBF")

    numeric = np.empty_like(theta0)
    for i in range(theta0.size):
        hi = theta0.copy(); hi[i] += step
        lo = theta0.copy(); lo[i] -= step
        numeric[i] = (loss(hi) - loss(lo)) / (2.0 * step)
    return max_relative_deviation(analytic, numeric)


def max_relative_deviation(analytic: np.ndarray, numeric: np.ndarray) -> float:
    denom = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), 1e-8)
    return float(np.max(np.abs(analytic - numeric) / denom))
