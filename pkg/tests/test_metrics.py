import numpy as np
import pytest
from hypothesis import given, strategies as st

from ucp_ensemble.metrics import ErrorSummary, error_summary, mae, mbre, mibre, min_max_normalize

positive = st.floats(min_value=0.1, max_value=1e6, allow_nan=False, allow_infinity=False)
pairs_strategy = st.lists(st.tuples(positive, positive), min_size=1, max_size=40)


class TestHandValues:
    def test_mae_perfect(self):
        assert mae([(100, 100), (50, 50)]) == 0.0

    def test_mae_hand(self):
        assert mae([(100, 110), (200, 190)]) == pytest.approx(10.0)

    def test_mbre_hand(self):
        assert mbre([(100, 150)]) == pytest.approx(0.5)

    def test_mbre_symmetric_pair(self):
        assert mbre([(150, 100)]) == pytest.approx(0.5)

    def test_mbre_perfect(self):
        assert mbre([(100, 100)]) == 0.0

    def test_mibre_hand(self):
        assert mibre([(100, 150)]) == pytest.approx(1 / 3)

    def test_mibre_perfect(self):
        assert mibre([(100, 100)]) == 0.0


class TestErrors:
    def test_empty(self):
        for fn in (mae, mbre, mibre):
            with pytest.raises(ValueError):
                fn([])

    def test_non_positive(self):
        for fn in (mbre, mibre):
            with pytest.raises(ValueError):
                fn([(0.0, 10.0)])
        # mae itself has no positivity requirement
        assert mae([(0.0, 10.0)]) == 10.0


class TestProperties:
    @given(pairs_strategy)
    def test_mae_swap_symmetry(self, pairs):
        swapped = [(e, a) for a, e in pairs]
        assert mae(pairs) == pytest.approx(mae(swapped))

    @given(pairs_strategy)
    def test_mibre_le_mbre(self, pairs):
        assert mibre(pairs) <= mbre(pairs) + 1e-12

    @given(pairs_strategy, st.floats(min_value=0.5, max_value=20.0))
    def test_scaling(self, pairs, c):
        scaled = [(a * c, e * c) for a, e in pairs]
        assert mae(scaled) == pytest.approx(c * mae(pairs), rel=1e-9)
        assert mbre(scaled) == pytest.approx(mbre(pairs), rel=1e-9)
        assert mibre(scaled) == pytest.approx(mibre(pairs), rel=1e-9)

    def test_equality_iff_perfect(self):
        perfect = [(10.0, 10.0), (20.0, 20.0)]
        assert mbre(perfect) == mibre(perfect) == 0.0
        imperfect = [(10.0, 10.0), (20.0, 25.0)]
        assert mbre(imperfect) > mibre(imperfect)


class TestMinMaxNormalize:
    def test_endpoints(self):
        assert min_max_normalize([2, 4, 6]) == pytest.approx([0.0, 0.5, 1.0])

    def test_degenerate_fallback(self):
        assert min_max_normalize([3, 3, 3]) == [0.5, 0.5, 0.5]

    def test_two_values(self):
        assert min_max_normalize([1, 2]) == [0.0, 1.0]

    def test_empty(self):
        with pytest.raises(ValueError):
            min_max_normalize([])

    @given(st.lists(st.integers(min_value=-1000, max_value=1000).map(float), min_size=2, max_size=30))
    def test_unique_extremes_hit_bounds(self, values):
        out = min_max_normalize(values)
        assert all(0.0 <= v <= 1.0 for v in out)
        if len(set(values)) > 1:
            if values.count(min(values)) == 1:
                assert out.count(0.0) == 1
            if values.count(max(values)) == 1:
                assert out.count(1.0) == 1


def test_error_summary_fields():
    s = error_summary([(100, 150)])
    assert s == ErrorSummary(50.0, 0.5, pytest.approx(1 / 3))
