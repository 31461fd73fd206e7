"""Rule-based fuzzy productivity model.

A deliberately transparent reconstruction: a single-input Mamdani system over
the environmental unfavorability score

    s = sum_{j=1..6} (5 - e_j) + e_7 + e_8

(the first six factors help when rated high, the last two hurt), with three
triangular membership functions spanning the observed training range of s.
Consequents are symmetric triangles anchored at the training productivity
quartiles (25th/50th/75th); with fewer than 8 training records they fall back
to the classical 20/28/36 hours-per-UCP anchors.  Defuzzification takes the
area-weighted centroid of the clipped consequents, which reduces exactly to an
anchor when a single rule fires.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .common import ModelConfig, TrainedModel, training_fingerprint, validate_training_inputs

FALLBACK_ANCHORS = (20.0, 28.0, 36.0)
_MIN_RECORDS_FOR_QUARTILES = 8


def unfavorability_score(X: np.ndarray) -> np.ndarray:
    return np.sum(5.0 - X[:, :6], axis=1) + X[:, 6] + X[:, 7]


@dataclass(frozen=True, eq=False)
class TrainedFuzzy(TrainedModel):
    s_low: float
    s_mid: float
    s_high: float
    anchors: tuple

    def _memberships(self, s: np.ndarray) -> np.ndarray:
        s = np.clip(s, self.s_low, self.s_high)
        lo, mid, hi = self.s_low, self.s_mid, self.s_high
        m = np.zeros((len(s), 3))
        left = np.where(s <= mid, (mid - s) / (mid - lo), 0.0)
        m[:, 0] = np.clip(left, 0.0, 1.0)
        m[:, 1] = np.where(s <= mid, (s - lo) / (mid - lo), (hi - s) / (hi - mid))
        m[:, 1] = np.clip(m[:, 1], 0.0, 1.0)
        right = np.where(s >= mid, (s - mid) / (hi - mid), 0.0)
        m[:, 2] = np.clip(right, 0.0, 1.0)
        return m

    def _predict_raw(self, X: np.ndarray) -> np.ndarray:
        s = unfavorability_score(X)
        anchors = np.asarray(self.anchors)
        if self.s_high == self.s_low:  # degenerate training range
            return np.full(len(s), anchors[1])
        m = self._memberships(s)
        # area of a symmetric unit triangle clipped at height h is
        # proportional to h * (2 - h); the common half-width cancels
        area = m * (2.0 - m)
        total = area.sum(axis=1)
        out = np.where(total > 0, (area @ anchors) / np.where(total > 0, total, 1.0), anchors[1])
        return out

    def _params(self) -> dict:
        return {"s_low": self.s_low, "s_mid": self.s_mid, "s_high": self.s_high,
                "anchors": list(self.anchors)}

    @classmethod
    def _from_params(cls, model_id, fingerprint, params):
        return cls(model_id, fingerprint,
                   float(params["s_low"]), float(params["s_mid"]), float(params["s_high"]),
                   tuple(float(a) for a in params["anchors"]))


def train_fuzzy(X, y, config: ModelConfig) -> TrainedFuzzy:
    X, y = validate_training_inputs(X, y)
    s = unfavorability_score(X)
    s_low, s_high = float(np.min(s)), float(np.max(s))
    s_mid = 0.5 * (s_low + s_high)
    if len(y) >= _MIN_RECORDS_FOR_QUARTILES:
        anchors = tuple(float(np.percentile(y, q)) for q in (25, 50, 75))
    else:
        anchors = FALLBACK_ANCHORS
    return TrainedFuzzy("FUZZY", training_fingerprint(X, y), s_low, s_mid, s_high, anchors)
