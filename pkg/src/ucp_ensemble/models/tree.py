"""CART-style regression tree with variance-minimizing binary splits."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .common import ModelConfig, TrainedModel, training_fingerprint, validate_training_inputs


def _sse(y: np.ndarray) -> float:
    return float(np.sum((y - y.mean()) ** 2)) if y.size else 0.0


def _best_split(X: np.ndarray, y: np.ndarray, min_leaf: int):
    """Lowest-SSE (feature, threshold) split; ties go to the lowest feature
    index then the smallest threshold (strict improvement required)."""
    best = None
    best_score = _sse(y)
    for j in range(X.shape[1]):
        col = X[:, j]
        order = np.argsort(col, kind="stable")
        sorted_col, sorted_y = col[order], y[order]
        for k in range(min_leaf, len(y) - min_leaf + 1):
            if sorted_col[k - 1] == sorted_col[k]:
                continue  # no threshold separates equal values
            left, right = sorted_y[:k], sorted_y[k:]
            score = _sse(left) + _sse(right)
            if score < best_score - 1e-12:
                best_score = score
                best = (j, 0.5 * (sorted_col[k - 1] + sorted_col[k]))
    return best


def _build(X: np.ndarray, y: np.ndarray, depth: int, config: ModelConfig) -> dict:
    if depth >= config.rt_max_depth or y.size < 2 * config.rt_min_leaf or _sse(y) == 0.0:
        return {"value": float(y.mean())}
    split = _best_split(X, y, config.rt_min_leaf)
    if split is None:
        return {"value": float(y.mean())}
    j, thr = split
    mask = X[:, j] <= thr
    return {
        "feature": int(j),
        "threshold": float(thr),
        "left": _build(X[mask], y[mask], depth + 1, config),
        "right": _build(X[~mask], y[~mask], depth + 1, config),
    }


@dataclass(frozen=True, eq=False)
class TrainedTree(TrainedModel):
    tree: dict

    def _predict_raw(self, X: np.ndarray) -> np.ndarray:
        out = np.empty(X.shape[0])
        for i, row in enumerate(X):
            node = self.tree
            while "value" not in node:
                node = node["left"] if row[node["feature"]] <= node["threshold"] else node["right"]
            out[i] = node["value"]
        return out

    def _params(self) -> dict:
        return {"tree": self.tree}

    @classmethod
    def _from_params(cls, model_id, fingerprint, params):
        return cls(model_id, fingerprint, params["tree"])


def train_rt(X, y, config: ModelConfig) -> TrainedTree:
    X, y = validate_training_inputs(X, y)
    return TrainedTree("RT", training_fingerprint(X, y), _build(X, y, 0, config))
