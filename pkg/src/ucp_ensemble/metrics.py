"""Accuracy measures (MAE, MBRE, MIBRE) and min-max normalization.

Pairs are (actual, estimated) tuples with both values strictly positive;
non-positive efforts are rejected at ingestion so no epsilon guards are
needed in the denominators here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


@dataclass(frozen=True)
class ErrorSummary:
    """The (MAE, MBRE, MIBRE) triple for one model on one evaluation set."""

    mae: float
    mbre: float
    mibre: float


def _split_pairs(pairs: Iterable, require_positive: bool) -> tuple:
    arr = np.asarray(list(pairs), dtype=float)
    if arr.size == 0:
        raise ValueError("empty pair sequence")
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("pairs must be (actual, estimated) tuples")
    actual, estimated = arr[:, 0], arr[:, 1]
    if require_positive and not (np.all(actual > 0) and np.all(estimated > 0)):
        raise ValueError("balanced relative errors need strictly positive values")
    return actual, estimated


def mae(pairs: Iterable) -> float:
    """Mean of absolute errors."""
    actual, estimated = _split_pairs(pairs, require_positive=False)
    return float(np.mean(np.abs(actual - estimated)))


def mbre(pairs: Iterable) -> float:
    """Mean balanced relative error: mean of |e - e^| / min(e, e^)."""
    actual, estimated = _split_pairs(pairs, require_positive=True)
    return float(np.mean(np.abs(actual - estimated) / np.minimum(actual, estimated)))


def mibre(pairs: Iterable) -> float:
    """Mean balanced inverse relative error: mean of |e - e^| / max(e, e^)."""
    actual, estimated = _split_pairs(pairs, require_positive=True)
    return float(np.mean(np.abs(actual - estimated) / np.maximum(actual, estimated)))


def error_summary(pairs: Iterable) -> ErrorSummary:
    pairs = list(pairs)
    return ErrorSummary(mae(pairs), mbre(pairs), mibre(pairs))


def min_max_normalize(values: Sequence[float]) -> list:
    """(v - min) / (max - min) per element.

    When all values coincide there is no information to discriminate, so every
    element maps to 0.5 (which turns the downstream sigmoid weighting into an
    unweighted mean).
    """
    x = np.asarray(values, dtype=float)
    if x.size == 0:
        raise ValueError("empty value sequence")
    lo, hi = float(np.min(x)), float(np.max(x))
    if hi == lo:
        return [0.5] * x.size
    return ((x - lo) / (hi - lo)).tolist()
