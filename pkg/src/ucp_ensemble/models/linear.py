"""Multiple linear regression and stepwise regression."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from .common import ModelConfig, TrainedModel, TrainingError, training_fingerprint, validate_training_inputs


@dataclass(frozen=True, eq=False)
class TrainedLinear(TrainedModel):
    intercept: float
    coefficients: np.ndarray  # length 8; stepwise leaves zeros for excluded factors

    def _predict_raw(self, X: np.ndarray) -> np.ndarray:
        return self.intercept + X @ self.coefficients

    def _params(self) -> dict:
        return {"intercept": self.intercept, "coefficients": self.coefficients.tolist()}

    @classmethod
    def _from_params(cls, model_id, fingerprint, params):
        return cls(model_id, fingerprint,
                   float(params["intercept"]),
                   np.asarray(params["coefficients"], dtype=float))


def _ols_fit(A: np.ndarray, y: np.ndarray, condition_limit: float, ridge: float) -> np.ndarray:
    """Normal equations with a small ridge fallback for near-singular Gram matrices."""
    G = A.T @ A
    if np.linalg.cond(G) > condition_limit:
        G = G + ridge * np.eye(G.shape[0])
    return np.linalg.solve(G, A.T @ y)


def train_mlr(X, y, config: ModelConfig) -> TrainedLinear:
    X, y = validate_training_inputs(X, y)
    A = np.column_stack([np.ones(len(y)), X])
    theta = _ols_fit(A, y, config.mlr_condition_limit, config.mlr_ridge)
    return TrainedLinear("MLR", training_fingerprint(X, y), float(theta[0]), theta[1:].copy())


def _rss(A: np.ndarray, y: np.ndarray, config: ModelConfig) -> float:
    theta = _ols_fit(A, y, config.mlr_condition_limit, config.mlr_ridge)
    r = y - A @ theta
    return float(r @ r)


def _partial_f_p(rss_small: float, rss_big: float, dof_big: int) -> float:
    """p-value of the partial F-test for one added term."""
    if dof_big <= 0:
        return 1.0
    if rss_big <= 1e-12:
        return 0.0
    f = max(rss_small - rss_big, 0.0) / (rss_big / dof_big)
    return float(stats.f.sf(f, 1, dof_big))


def train_sr(X, y, config: ModelConfig) -> TrainedLinear:
    """Forward selection (entry p < sr_entry_p) then backward elimination
    (exit p > sr_exit_p), iterated to a fixed point.  Ties break toward the
    lowest factor index."""
    X, y = validate_training_inputs(X, y)
    n, d = X.shape

    def design(sel):
        return np.column_stack([np.ones(n), X[:, sel]]) if sel else np.ones((n, 1))

    selected: list = []
    changed = True
    while changed:
        changed = False
        # forward step
        rss_cur = _rss(design(selected), y, config)
        best_j, best_p = None, 1.0
        for j in range(d):
            if j in selected:
                continue
            trial = sorted(selected + [j])
            dof = n - len(trial) - 1
            p = _partial_f_p(rss_cur, _rss(design(trial), y, config), dof)
            if p < best_p:  # strict: earlier (lower) index wins ties
                best_j, best_p = j, p
        if best_j is not None and best_p < config.sr_entry_p:
            selected = sorted(selected + [best_j])
            changed = True
        # backward step
        while len(selected) > 0:
            rss_full = _rss(design(selected), y, config)
            dof = n - len(selected) - 1
            worst_j, worst_p = None, -1.0
            for j in selected:
                reduced = [k for k in selected if k != j]
                p = _partial_f_p(_rss(design(reduced), y, config), rss_full, dof)
                if p > worst_p:
                    worst_j, worst_p = j, p
            if worst_j is not None and worst_p > config.sr_exit_p:
                selected = [k for k in selected if k != worst_j]
                changed = True
            else:
                break

    A = design(selected)
    theta = _ols_fit(A, y, config.mlr_condition_limit, config.mlr_ridge)
    coefs = np.zeros(d)
    for pos, j in enumerate(selected):
        coefs[j] = theta[pos + 1]
    return TrainedLinear("SR", training_fingerprint(X, y), float(theta[0]), coefs)
