"""LOOCV harness, comparison tables, Wilcoxon test, confidence intervals.

Every project plays test case once; each fold trains the ensemble (and with
it all seven base models) on the remaining projects and predicts the held-out
project's effort.  The comparison report mirrors the accuracy-table /
interval-plot shape: per-estimator MAE/MBRE/MIBRE on effort, a 95% confidence
interval of the absolute errors, and a Wilcoxon signed-rank test of each
estimator against the ensemble.
"""

from __future__ import annotations

import hashlib
import io
import json
import math
from dataclasses import dataclass, replace
from typing import IO, Optional, Sequence, Union

import numpy as np

from .dataset import Dataset, EnvFactors, ProjectRecord
from .ensemble import EnsembleConfig, TrainedEnsemble, predict_effort, train_ensemble
from .metrics import ErrorSummary, error_summary
from .models import MODEL_IDS

ENSEMBLE_KEY = "Ensemble"
KARNER_KEY = "Karner"
SCHNEIDER_WINTER_KEY = "SchneiderWinter"
ESTIMATOR_ORDER = (ENSEMBLE_KEY, *MODEL_IDS, KARNER_KEY, SCHNEIDER_WINTER_KEY)
LEARNED_ESTIMATORS = (ENSEMBLE_KEY, *MODEL_IDS)

MIN_LOOCV_RECORDS = 6


def karner_baseline(env) -> float:
    """The classical fixed 20 hours/UCP rate, regardless of the environment."""
    return 20.0


def schneider_winter_baseline(env) -> float:
    """Three-level productivity from counting unfavorable environmental factors.

    A factor counts as unfavorable when one of e1..e6 is rated below 3 or one
    of e7..e8 above 3.  Up to 2 unfavorable factors: 20 h/UCP; 3 or 4: 28;
    5 or more: 36.  (The counting rule comes from the classical source; only
    the three outcome levels are fixed by the method itself.)
    """
    ratings = env.ratings if isinstance(env, EnvFactors) else tuple(env)
    count = sum(1 for e in ratings[:6] if e < 3) + sum(1 for e in ratings[6:] if e > 3)
    if count <= 2:
        return 20.0
    if count <= 4:
        return 28.0
    return 36.0


def _record_key(record: ProjectRecord) -> str:
    h = hashlib.sha256()
    h.update(np.asarray((*record.env.ratings, record.ucp, record.effort), dtype=float).tobytes())
    return h.hexdigest()


@dataclass(frozen=True)
class FoldOutcome:
    project_index: int
    actual_effort: float
    predicted_effort: dict  # estimator name -> predicted effort
    test_fingerprint: str
    training_fingerprints: tuple


@dataclass(frozen=True)
class WilcoxonResult:
    statistic: float  # W = min(W+, W-)
    n_effective: int
    p_value: float
    significant_at_05: bool


@dataclass(frozen=True)
class ComparisonReport:
    estimators: tuple
    errors: dict  # estimator -> ErrorSummary (effort scale)
    intervals: dict  # estimator -> (low, high) 95% CI of absolute errors
    wilcoxon_vs_ensemble: dict  # estimator -> WilcoxonResult (ensemble excluded)


def loocv(dataset: Dataset, config: EnsembleConfig, trainers=None) -> list:
    """One FoldOutcome per project, trained with the project held out."""
    n = len(dataset)
    if n < MIN_LOOCV_RECORDS:
        raise ValueError(f"LOOCV needs at least {MIN_LOOCV_RECORDS} records")
    fold_seeds = np.random.SeedSequence(config.seed).spawn(n)
    outcomes = []
    for i in range(n):
        training = dataset.drop(i)
        fold_config = replace(config, seed=int(fold_seeds[i].generate_state(1, dtype=np.uint64)[0]))
        try:
            ens = train_ensemble(training, fold_config, trainers)
        except Exception as exc:
            raise RuntimeError(f"fold {i}: {exc}") from exc
        test = dataset[i]
        base = ens.base_predictions(test.env)
        _, ens_effort = predict_effort(ens, test.env, test.ucp)
        predicted = {ENSEMBLE_KEY: ens_effort}
        predicted.update({m: base[m] * test.ucp for m in base})
        predicted[KARNER_KEY] = karner_baseline(test.env) * test.ucp
        predicted[SCHNEIDER_WINTER_KEY] = schneider_winter_baseline(test.env) * test.ucp
        outcomes.append(FoldOutcome(
            project_index=i,
            actual_effort=test.effort,
            predicted_effort=predicted,
            test_fingerprint=_record_key(test),
            training_fingerprints=tuple(_record_key(r) for r in training),
        ))
    return outcomes


def _midranks(values: np.ndarray) -> np.ndarray:
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values))
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i:j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def _exact_p(doubled_ranks: Sequence[int], doubled_w: int) -> float:
    """P(W+ <= w) by dynamic programming over the signed-rank distribution,
    doubled to integers so midranks stay exact."""
    total = sum(doubled_ranks)
    counts = np.zeros(total + 1)
    counts[0] = 1.0
    for r in doubled_ranks:
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[:total + 1 - r]
        counts = counts + shifted
    return float(np.sum(counts[: doubled_w + 1]) / counts.sum())


EXACT_LIMIT = 20


def wilcoxon_signed_rank(a: Sequence[float], b: Sequence[float]) -> WilcoxonResult:
    """Two-sided Wilcoxon signed-rank test on paired samples.

    Zero differences are dropped, tied magnitudes get midranks, W is the
    smaller of the signed rank sums.  The p-value is exact (full enumeration
    of the sign distribution) up to 20 effective pairs, and a normal
    approximation with continuity and tie corrections beyond that.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size != b.size or a.size < 5:
        raise ValueError("paired samples of equal length >= 5 required")
    d = a - b
    d = d[d != 0.0]
    n = d.size
    if n == 0:
        return WilcoxonResult(0.0, 0, 1.0, False)
    ranks = _midranks(np.abs(d))
    w_plus = float(np.sum(ranks[d > 0]))
    w_minus = float(np.sum(ranks[d < 0]))
    w = min(w_plus, w_minus)
    if n <= EXACT_LIMIT:
        doubled = [int(round(2.0 * r)) for r in ranks]
        p = min(1.0, 2.0 * _exact_p(doubled, int(round(2.0 * w))))
    else:
        mu = n * (n + 1) / 4.0
        tie_term = 0.0
        _, tie_counts = np.unique(np.abs(d), return_counts=True)
        for t in tie_counts:
            tie_term += t**3 - t
        sigma2 = n * (n + 1) * (2 * n + 1) / 24.0 - tie_term / 48.0
        z = (w - mu + 0.5) / math.sqrt(sigma2)
        p = min(1.0, 2.0 * 0.5 * math.erfc(-z / math.sqrt(2.0)))
    return WilcoxonResult(w, n, p, p < 0.05)


# two-sided 95% Student-t critical values, df = 1..29
_T_TABLE = (
    12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
    2.201, 2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
    2.080, 2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045,
)
_Z_975 = 1.959963985


def t_critical_975(df: int) -> float:
    """97.5th percentile of Student's t: tabulated for df < 30, Cornish-Fisher
    expansion of the normal quantile beyond."""
    if df < 1:
        raise ValueError("df must be >= 1")
    if df <= len(_T_TABLE):
        return _T_TABLE[df - 1]
    z = _Z_975
    return (z + (z**3 + z) / (4.0 * df)
            + (5 * z**5 + 16 * z**3 + 3 * z) / (96.0 * df**2)
            + (3 * z**7 + 19 * z**5 + 17 * z**3 - 15 * z) / (384.0 * df**3))


def confidence_interval(values: Sequence[float], level: float = 0.95) -> tuple:
    """t-based confidence interval of the mean: mean +- t(n-1, 0.975) * sem."""
    if level != 0.95:
        raise ValueError("only the 95% level is supported")
    x = np.asarray(values, dtype=float)
    if x.size < 2:
        raise ValueError("confidence interval needs at least 2 values")
    mean = float(np.mean(x))
    sem = float(np.std(x, ddof=1)) / math.sqrt(x.size)
    half = t_critical_975(x.size - 1) * sem
    return mean - half, mean + half


def compare(outcomes: Sequence[FoldOutcome]) -> ComparisonReport:
    """Effort-level accuracy table plus Wilcoxon-vs-ensemble and 95% CIs."""
    if not outcomes:
        raise ValueError("no fold outcomes")
    estimators = tuple(k for k in ESTIMATOR_ORDER if k in outcomes[0].predicted_effort)
    errors, intervals, abs_errors = {}, {}, {}
    for est in estimators:
        pairs = [(o.actual_effort, o.predicted_effort[est]) for o in outcomes]
        errors[est] = error_summary(pairs)
        ae = [abs(a - p) for a, p in pairs]
        abs_errors[est] = ae
        intervals[est] = confidence_interval(ae) if len(ae) >= 2 else (ae[0], ae[0])
    wilcoxon = {}
    if ENSEMBLE_KEY in estimators and len(outcomes) >= 5:
        for est in estimators:
            if est == ENSEMBLE_KEY:
                continue
            wilcoxon[est] = wilcoxon_signed_rank(abs_errors[est], abs_errors[ENSEMBLE_KEY])
    return ComparisonReport(estimators, errors, intervals, wilcoxon)


def _fmt(x: float) -> str:
    return format(float(x), ".6g")


def report_to_dict(report: ComparisonReport) -> dict:
    """JSON-ready form with all floats at 6 significant digits."""
    return {
        "accuracy": [
            {
                "estimator": est,
                "mae": float(_fmt(report.errors[est].mae)),
                "mbre": float(_fmt(report.errors[est].mbre)),
                "mibre": float(_fmt(report.errors[est].mibre)),
                "ci_low": float(_fmt(report.intervals[est][0])),
                "ci_high": float(_fmt(report.intervals[est][1])),
            }
            for est in report.estimators
        ],
        "wilcoxon_vs_ensemble": [
            {
                "estimator": est,
                "wilcoxon_w": float(_fmt(r.statistic)),
                "n_effective": r.n_effective,
                "p_value": float(_fmt(r.p_value)),
                "significant": r.significant_at_05,
            }
            for est, r in report.wilcoxon_vs_ensemble.items()
        ],
    }


def report_from_dict(d: dict) -> ComparisonReport:
    estimators = tuple(row["estimator"] for row in d["accuracy"])
    errors = {row["estimator"]: ErrorSummary(row["mae"], row["mbre"], row["mibre"])
              for row in d["accuracy"]}
    intervals = {row["estimator"]: (row["ci_low"], row["ci_high"]) for row in d["accuracy"]}
    wilcoxon = {row["estimator"]: WilcoxonResult(row["wilcoxon_w"], row["n_effective"],
                                                 row["p_value"], row["significant"])
                for row in d["wilcoxon_vs_ensemble"]}
    return ComparisonReport(estimators, errors, intervals, wilcoxon)


def emit_report(report: ComparisonReport, fmt: str = "text", sink: Optional[IO] = None) -> str:
    """Render a report deterministically as text, csv, or json.

    Returns the rendered string and, when `sink` is given, writes it there.
    """
    if fmt == "json":
        out = json.dumps(report_to_dict(report), indent=2) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        buf.write("estimator,mae,mbre,mibre,ci_low,ci_high\n")
        for est in report.estimators:
            e, (lo, hi) = report.errors[est], report.intervals[est]
            buf.write(f"{est},{_fmt(e.mae)},{_fmt(e.mbre)},{_fmt(e.mibre)},{_fmt(lo)},{_fmt(hi)}\n")
        buf.write("\n")
        buf.write("estimator,wilcoxon_w,p_value,significant\n")
        for est, r in report.wilcoxon_vs_ensemble.items():
            buf.write(f"{est},{_fmt(r.statistic)},{_fmt(r.p_value)},{str(r.significant_at_05).lower()}\n")
        out = buf.getvalue()
    elif fmt == "text":
        buf = io.StringIO()
        buf.write(f"{'estimator':<16}{'MAE':>12}{'MBRE':>12}{'MIBRE':>12}{'CI low':>12}{'CI high':>12}\n")
        for est in report.estimators:
            e, (lo, hi) = report.errors[est], report.intervals[est]
            buf.write(f"{est:<16}{_fmt(e.mae):>12}{_fmt(e.mbre):>12}{_fmt(e.mibre):>12}"
                      f"{_fmt(lo):>12}{_fmt(hi):>12}\n")
        if report.wilcoxon_vs_ensemble:
            buf.write(f"\nWilcoxon signed-rank vs {ENSEMBLE_KEY} (absolute errors)\n")
            buf.write(f"{'estimator':<16}{'W':>12}{'p-value':>12}{'significant':>14}\n")
            for est, r in report.wilcoxon_vs_ensemble.items():
                buf.write(f"{est:<16}{_fmt(r.statistic):>12}{_fmt(r.p_value):>12}"
                          f"{str(r.significant_at_05).lower():>14}\n")
        out = buf.getvalue()
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    if sink is not None:
        sink.write(out)
    return out
