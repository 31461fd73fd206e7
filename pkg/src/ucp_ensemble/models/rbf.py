"""Radial basis function network: seeded k-means centers + linear output layer."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .common import ModelConfig, TrainedModel, training_fingerprint, validate_training_inputs

_RATING_SCALE = 5.0
_DEFAULT_MAX_CENTERS = 10


def kmeans(points: np.ndarray, k: int, iters: int, seed: int) -> np.ndarray:
    """Plain Lloyd iterations from a seeded sample of distinct points.

    Clusters that empty out keep their previous center, which keeps the run
    deterministic and the center count fixed.
    """
    rng = np.random.default_rng(seed)
    centers = points[rng.choice(len(points), size=k, replace=False)].copy()
    for _ in range(iters):
        d2 = np.sum((points[:, None, :] - centers[None, :, :]) ** 2, axis=2)
        assign = np.argmin(d2, axis=1)
        for c in range(k):
            members = points[assign == c]
            if members.size:
                centers[c] = members.mean(axis=0)
    return centers


def _widths(centers: np.ndarray) -> np.ndarray:
    """Per-center width: mean distance to the 2 nearest other centers."""
    k = len(centers)
    if k == 1:
        return np.array([1.0])
    d = np.sqrt(np.maximum(
        np.sum(centers**2, axis=1)[:, None] + np.sum(centers**2, axis=1)[None, :]
        - 2.0 * centers @ centers.T, 0.0))
    np.fill_diagonal(d, np.inf)
    nearest = np.sort(d, axis=1)[:, : min(2, k - 1)]
    w = nearest.mean(axis=1)
    w[w <= 0] = max(float(w[w > 0].mean()), 1e-6) if np.any(w > 0) else 1e-6
    return w


def _design(Xs: np.ndarray, centers: np.ndarray, widths: np.ndarray) -> np.ndarray:
    d2 = np.sum((Xs[:, None, :] - centers[None, :, :]) ** 2, axis=2)
    phi = np.exp(-d2 / (2.0 * widths[None, :] ** 2))
    return np.column_stack([phi, np.ones(len(Xs))])


@dataclass(frozen=True, eq=False)
class TrainedRBF(TrainedModel):
    centers: np.ndarray  # scaled coordinates
    widths: np.ndarray
    weights: np.ndarray  # hidden-to-output weights, bias last

    def _predict_raw(self, X: np.ndarray) -> np.ndarray:
        return _design(X / _RATING_SCALE, self.centers, self.widths) @ self.weights

    def _params(self) -> dict:
        return {"centers": self.centers.tolist(), "widths": self.widths.tolist(),
                "weights": self.weights.tolist()}

    @classmethod
    def _from_params(cls, model_id, fingerprint, params):
        return cls(model_id, fingerprint,
                   np.asarray(params["centers"], dtype=float),
                   np.asarray(params["widths"], dtype=float),
                   np.asarray(params["weights"], dtype=float))


def _basis(X: np.ndarray, config: ModelConfig) -> tuple:
    Xs = X / _RATING_SCALE
    n = len(Xs)
    k = config.rbf_centers if config.rbf_centers is not None else min(n, _DEFAULT_MAX_CENTERS)
    k = max(1, min(k, n))
    if k == n:
        centers = Xs.copy()  # one center per training point: interpolation mode
    else:
        centers = kmeans(Xs, k, config.rbf_kmeans_iters, config.seed)
    widths = _widths(centers)
    return Xs, centers, widths


def _solve_output(phi: np.ndarray, y: np.ndarray, ridge: float) -> np.ndarray:
    if ridge == 0.0:
        return np.linalg.lstsq(phi, y, rcond=None)[0]
    G = phi.T @ phi + ridge * np.eye(phi.shape[1])
    return np.linalg.solve(G, phi.T @ y)


def train_rbf(X, y, config: ModelConfig) -> TrainedRBF:
    X, y = validate_training_inputs(X, y)
    Xs, centers, widths = _basis(X, config)
    weights = _solve_output(_design(Xs, centers, widths), y, config.rbf_ridge)
    return TrainedRBF("RBF", training_fingerprint(X, y), centers, widths, weights)


def loss_and_grad(X, y, weights: np.ndarray, config: ModelConfig) -> tuple:
    """Ridge least-squares objective of the output layer and its gradient,
    for an arbitrary output-weight vector over the fitted basis."""
    X, y = validate_training_inputs(X, y)
    Xs, centers, widths = _basis(X, config)
    phi = _design(Xs, centers, widths)
    resid = phi @ weights - y
    loss = float(np.mean(resid**2) + config.rbf_ridge * np.sum(weights**2))
    grad = (2.0 / len(y)) * (phi.T @ resid) + 2.0 * config.rbf_ridge * weights
    return loss, grad
