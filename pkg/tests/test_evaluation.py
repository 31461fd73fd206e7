import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ucp_ensemble.ensemble import EnsembleConfig
from ucp_ensemble.evaluation import (
    ENSEMBLE_KEY,
    ESTIMATOR_ORDER,
    FoldOutcome,
    compare,
    confidence_interval,
    emit_report,
    karner_baseline,
    loocv,
    report_from_dict,
    report_to_dict,
    schneider_winter_baseline,
    t_critical_975,
    wilcoxon_signed_rank,
)
from ucp_ensemble.models import ModelConfig
from ucp_ensemble.models.common import TrainedModel

from conftest import make_dataset, random_dataset


class MeanModel(TrainedModel):
    """Stub predicting the training-set mean productivity."""

    def __init__(self, y):
        super().__init__("MEAN", "mean")
        object.__setattr__(self, "value", float(np.mean(y)))

    def _predict_raw(self, X):
        return np.full(len(X), self.value)


MEAN_TRAINERS = {f"M{k}": (lambda X, y, cfg: MeanModel(y)) for k in range(7)}


def wilcoxon_enumeration_oracle(diffs):
    """Exact two-sided p by brute-force enumeration of all sign assignments."""
    diffs = [d for d in diffs if d != 0.0]
    n = len(diffs)
    mags = [abs(d) for d in diffs]
    order = sorted(range(n), key=lambda i: mags[i])
    ranks = [0.0] * n
    i = 0
    while i < n:
        j = i
        while j + 1 < n and mags[order[j + 1]] == mags[order[i]]:
            j += 1
        for k in range(i, j + 1):
            ranks[order[k]] = (i + j) / 2 + 1
        i = j + 1
    w_plus = sum(r for d, r in zip(diffs, ranks) if d > 0)
    w_minus = sum(r for d, r in zip(diffs, ranks) if d < 0)
    w = min(w_plus, w_minus)
    count = 0
    for signs in itertools.product((0, 1), repeat=n):
        wp = sum(r for s, r in zip(signs, ranks) if s)
        if wp <= w + 1e-9:
            count += 1
    return w, min(1.0, 2.0 * count / 2**n)


class TestBaselines:
    def test_karner_constant(self):
        for env in ([0.0] * 8, [5.0] * 8, [2.5] * 8):
            assert karner_baseline(env) == 20.0

    def test_schneider_winter_favorable(self):
        assert schneider_winter_baseline([3, 3, 4, 5, 3, 3, 3, 2]) == 20.0

    def test_schneider_winter_middle(self):
        # exactly three unfavorable factors
        assert schneider_winter_baseline([2, 2, 2, 3, 3, 3, 3, 3]) == 28.0

    def test_schneider_winter_all_unfavorable(self):
        assert schneider_winter_baseline([0, 1, 2, 2, 1, 0, 4, 5]) == 36.0

    def test_band_edges(self):
        assert schneider_winter_baseline([2, 2, 3, 3, 3, 3, 3, 3]) == 20.0  # count 2
        assert schneider_winter_baseline([2, 2, 2, 2, 3, 3, 3, 3]) == 28.0  # count 4
        assert schneider_winter_baseline([2, 2, 2, 2, 2, 3, 3, 3]) == 36.0  # count 5


class TestWilcoxon:
    def test_identical_samples(self):
        a = [1.0, 2.0, 3.0, 4.0, 5.0]
        r = wilcoxon_signed_rank(a, a)
        assert r.n_effective == 0
        assert r.p_value == 1.0
        assert not r.significant_at_05

    def test_all_positive_n5(self):
        a = [11.0, 22.0, 33.0, 44.0, 55.0]
        b = [10.0, 20.0, 30.0, 40.0, 50.0]
        r = wilcoxon_signed_rank(a, b)
        assert r.statistic == 0.0
        assert r.p_value == pytest.approx(0.0625, abs=1e-12)

    def test_mixed_signs_hand_case(self):
        b = [0.0] * 5
        a = [1.0, -2.0, 3.0, -4.0, 5.0]
        r = wilcoxon_signed_rank(a, b)
        assert r.statistic == 6.0  # W+ = 9, W- = 6
        _, p = wilcoxon_enumeration_oracle(a)
        assert r.p_value == pytest.approx(p, abs=1e-12)

    def test_symmetry(self):
        rng = np.random.default_rng(1)
        a = rng.normal(size=8)
        b = rng.normal(size=8)
        r1 = wilcoxon_signed_rank(a, b)
        r2 = wilcoxon_signed_rank(b, a)
        assert r1.statistic == r2.statistic
        assert r1.p_value == r2.p_value

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.integers(min_value=-5, max_value=5), min_size=5, max_size=10),
           st.integers(min_value=0, max_value=2**31 - 1))
    def test_exact_matches_enumeration(self, diffs, seed):
        # integer-valued differences force plenty of rank ties
        a = np.asarray(diffs, dtype=float)
        b = np.zeros(len(diffs))
        if np.count_nonzero(a) == 0:
            return
        r = wilcoxon_signed_rank(a, b)
        w, p = wilcoxon_enumeration_oracle(list(a))
        assert r.statistic == pytest.approx(w)
        assert r.p_value == pytest.approx(p, abs=1e-12)

    def test_normal_approximation_branch(self):
        rng = np.random.default_rng(2)
        a = rng.normal(0.5, 1.0, size=40)
        b = np.zeros(40)
        r = wilcoxon_signed_rank(a, b)
        assert 0.0 <= r.p_value <= 1.0
        assert r.n_effective == 40

    def test_length_validation(self):
        with pytest.raises(ValueError):
            wilcoxon_signed_rank([1, 2, 3], [1, 2, 3])


def t_cdf_quantile_oracle(df, prob=0.975):
    """Invert the t CDF by bisection on Simpson-integrated density."""

    log_norm = (math.lgamma((df + 1) / 2) - math.lgamma(df / 2)
                - 0.5 * math.log(df * math.pi))

    def pdf(x):
        return math.exp(log_norm - (df + 1) / 2 * math.log1p(x * x / df))

    def cdf(x):
        # integrate pdf over [-60, x] with Simpson's rule
        a, b, steps = -60.0, x, 4000
        h = (b - a) / steps
        total = pdf(a) + pdf(b)
        for i in range(1, steps):
            total += pdf(a + i * h) * (4 if i % 2 else 2)
        return total * h / 3

    lo, hi = 0.0, 200.0
    for _ in range(60):
        mid = (lo + hi) / 2
        if cdf(mid) < prob:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


class TestConfidenceInterval:
    def test_constant_values(self):
        assert confidence_interval([7.0, 7.0, 7.0]) == (7.0, 7.0)

    def test_symmetric_about_mean(self):
        vals = [1.0, 4.0, 9.0, 16.0]
        lo, hi = confidence_interval(vals)
        mean = np.mean(vals)
        assert mean - lo == pytest.approx(hi - mean, rel=1e-12)
        assert lo <= mean <= hi

    def test_against_quadrature_oracle(self):
        vals = list(range(1, 11))
        lo, hi = confidence_interval(vals)
        t = t_cdf_quantile_oracle(9)
        sem = np.std(vals, ddof=1) / math.sqrt(10)
        assert lo == pytest.approx(5.5 - t * sem, abs=1e-3)
        assert hi == pytest.approx(5.5 + t * sem, abs=1e-3)

    def test_t_approximation_large_df(self):
        for df in (30, 60, 120, 500):
            assert t_critical_975(df) == pytest.approx(t_cdf_quantile_oracle(df), abs=1e-3)

    def test_width_shrinks_like_sqrt_n(self):
        rng = np.random.default_rng(3)
        widths = {}
        for n in (10, 40, 160):
            ws = []
            for _ in range(500):
                lo, hi = confidence_interval(rng.normal(50, 8, size=n))
                ws.append(hi - lo)
            widths[n] = np.mean(ws)
        assert 0.45 <= widths[40] / widths[10] <= 0.55
        assert 0.45 <= widths[160] / widths[40] <= 0.55

    def test_level_restriction(self):
        with pytest.raises(ValueError):
            confidence_interval([1.0, 2.0], level=0.9)

    def test_too_few(self):
        with pytest.raises(ValueError):
            confidence_interval([1.0])


class TestLoocv:
    def test_fold_count_and_leakage(self):
        ds = random_dataset(8, seed=30)
        outcomes = loocv(ds, EnsembleConfig(replicates=2, seed=1), MEAN_TRAINERS)
        assert len(outcomes) == 8
        assert sorted(o.project_index for o in outcomes) == list(range(8))
        for o in outcomes:
            assert o.test_fingerprint not in o.training_fingerprints
            assert len(o.training_fingerprints) == 7

    def test_mean_stub_predicts_mean_of_others(self):
        # 6 records with two productivity levels; LOOCV prediction for each
        # record is the mean productivity of the other five times its UCP
        rows = []
        prods = [10.0, 10.0, 10.0, 30.0, 30.0, 30.0]
        for k, p in enumerate(prods):
            ratings = [float((k + j) % 6) for j in range(8)]
            rows.append((ratings, 100.0, p * 100.0))
        ds = make_dataset(rows)
        outcomes = loocv(ds, EnsembleConfig(replicates=2, seed=2), MEAN_TRAINERS)
        for o in outcomes:
            others = [prods[i] for i in range(6) if i != o.project_index]
            expected = np.mean(others) * 100.0
            assert o.predicted_effort[ENSEMBLE_KEY] == pytest.approx(expected, rel=1e-9)

    def test_outlier_excluded_from_training(self):
        ds = random_dataset(6, seed=31)
        outcomes = loocv(ds, EnsembleConfig(replicates=2, seed=3), MEAN_TRAINERS)
        for o in outcomes:
            assert o.test_fingerprint not in o.training_fingerprints

    def test_too_small(self):
        with pytest.raises(ValueError):
            loocv(random_dataset(5, seed=32), EnsembleConfig())


def synthetic_outcomes(n=10, seed=40):
    rng = np.random.default_rng(seed)
    outcomes = []
    for i in range(n):
        actual = rng.uniform(1000, 5000)
        predicted = {est: actual * rng.uniform(0.7, 1.3) for est in ESTIMATOR_ORDER}
        outcomes.append(FoldOutcome(i, actual, predicted, f"t{i}", ()))
    return outcomes


class TestCompare:
    def test_perfect_estimator_row(self):
        outcomes = []
        for i in range(6):
            actual = 1000.0 + i * 100
            predicted = {est: (actual if est == "MLR" else actual * 1.2)
                         for est in ESTIMATOR_ORDER}
            outcomes.append(FoldOutcome(i, actual, predicted, f"t{i}", ()))
        report = compare(outcomes)
        assert report.errors["MLR"].mae == 0.0
        assert report.errors["MLR"].mbre == 0.0
        assert report.errors["MLR"].mibre == 0.0

    def test_pure_function(self):
        outcomes = synthetic_outcomes()
        assert compare(outcomes) == compare(outcomes)

    def test_permuted_errors_same_mae(self):
        # two estimators whose absolute-error sequences are permutations
        outcomes = []
        errs = [100.0, 200.0, 300.0, 400.0, 500.0, 600.0]
        for i in range(6):
            actual = 2000.0
            predicted = {est: actual for est in ESTIMATOR_ORDER}
            predicted["MLR"] = actual + errs[i]
            predicted["RT"] = actual + errs[-(i + 1)]
            outcomes.append(FoldOutcome(i, actual, predicted, f"t{i}", ()))
        report = compare(outcomes)
        assert report.errors["MLR"].mae == pytest.approx(report.errors["RT"].mae)

    def test_every_estimator_covered_and_ci_contains_mean(self):
        report = compare(synthetic_outcomes())
        assert report.estimators == ESTIMATOR_ORDER
        for est in report.estimators:
            lo, hi = report.intervals[est]
            assert lo <= report.errors[est].mae <= hi

    def test_wilcoxon_excludes_ensemble(self):
        report = compare(synthetic_outcomes())
        assert ENSEMBLE_KEY not in report.wilcoxon_vs_ensemble
        assert set(report.wilcoxon_vs_ensemble) == set(ESTIMATOR_ORDER) - {ENSEMBLE_KEY}


class TestEmitReport:
    def test_deterministic(self):
        report = compare(synthetic_outcomes())
        for fmt in ("text", "csv", "json"):
            assert emit_report(report, fmt) == emit_report(report, fmt)

    def test_csv_row_count(self):
        report = compare(synthetic_outcomes())
        out = emit_report(report, "csv")
        first_table = out.split("\n\n")[0].strip().splitlines()
        assert len(first_table) == 1 + len(ESTIMATOR_ORDER)

    def test_json_roundtrip(self):
        import json as jsonlib

        report = compare(synthetic_outcomes())
        parsed = report_from_dict(jsonlib.loads(emit_report(report, "json")))
        assert parsed.estimators == report.estimators
        for est in report.estimators:
            assert parsed.errors[est].mae == pytest.approx(report.errors[est].mae, rel=1e-5)
            assert parsed.intervals[est][0] == pytest.approx(report.intervals[est][0], rel=1e-5)
        for est, r in report.wilcoxon_vs_ensemble.items():
            assert parsed.wilcoxon_vs_ensemble[est].p_value == pytest.approx(r.p_value, rel=1e-5)

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            emit_report(compare(synthetic_outcomes()), "xml")
