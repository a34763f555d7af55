"""Tests for Lang-Trotter counts and the trace filter."""

import pytest

from src.algebra.base_ring import BasePoly, PolynomialRing
from src.algebra.finite_field import field_create
from src.analysis.lang_trotter import (
    admissible_traces,
    filter_count,
    filter_precision,
    lang_trotter_counts,
    lang_trotter_row,
    trace_partition,
)
from src.analysis.sato_tate import PointTrace, collect_point_traces
from src.common.errors import ModuleError
from src.drinfeld.module import drinfeld_create


def P(*coeffs, q=3):
    return BasePoly(q, tuple(coeffs))


def point(a_x, d=4):
    return PointTrace(d=d, prime=P(1, 0, 0, 0, 1), a_x=a_x, bucket=(0,), valuation=0, hasse_ok=True, strict_hasse_ok=True)


class TestFilter:
    """Test the precision and count of the trace filter."""

    def test_constant_trace(self):
        """Test a = 1 at d = 4, n = 2 uses one digit."""
        assert filter_precision(P(1), 4, 2) == 1

    def test_zero_trace_like_constant(self):
        """Test a = 0 gets the same precision as a nonzero constant."""
        assert filter_precision(BasePoly.zero(3), 7, 2) == filter_precision(P(1), 7, 2)

    def test_large_trace_has_no_filter(self):
        """Test deg a > ceil(d/n) - 1 leaves the filter undefined."""
        assert filter_precision(P(0, 0, 0, 1), 4, 2) is None

    def test_precision_grows_with_degree(self):
        """Test j = min(ceil(d/n), ceil(d/n^2)) for constant a."""
        assert filter_precision(P(2), 9, 2) == 3
        assert filter_precision(P(2), 9, 3) == 1

    def test_count(self):
        """Test points with deg(a_x - a) <= e - j pass."""
        points = [point(P(1)), point(P(1, 1)), point(P(0, 0, 1))]
        # e = 2, j = 1: deg(a_x - 1) <= 1
        assert filter_count(points, P(1), 4, 2, 1) == 2


class TestRows:
    """Test one Lang-Trotter row from synthetic points."""

    def test_counts_and_partition(self):
        """Test the row counts trace a and the partition covers every point."""
        points = [point(P(1)), point(P(1)), point(P(2)), point(P(0, 1))]
        assert trace_partition(points) == {P(1): 2, P(2): 1, P(0, 1): 1}
        row = lang_trotter_row(points, P(1), 4, 2)
        assert row.count == 2
        assert row.good_points == 4
        assert row.partition_ok
        assert row.filter_ok
        assert row.ratio_bound == pytest.approx(2 / 3**3)
        assert row.haar_mass == pytest.approx(1 / 3)

    def test_partition_over_admissible_traces(self):
        """Test a trace beyond the Hasse bound falls outside the partition."""
        points = [point(P(1)), point(P(2)), point(P(0, 1)), point(P(0, 0, 0, 1))]
        assert len(list(admissible_traces(3, 4, 2))) == 27
        row = lang_trotter_row(points, P(1), 4, 2)
        assert row.partition_total == 3
        assert row.good_points == 4
        assert not row.partition_ok

    def test_good_points_counted_separately(self):
        """Test a missing traced point breaks the partition."""
        row = lang_trotter_row([point(P(1)), point(P(2))], P(1), 4, 2, good_points=3)
        assert row.partition_total == 2
        assert not row.partition_ok

    def test_model(self):
        """Test the row model carries the filter ratio."""
        row = lang_trotter_row([point(P(1)), point(P(0, 1))], P(1), 4, 2)
        model = row.to_model()
        assert model.trace == [1]
        assert model.filter_ratio == pytest.approx(row.filter_count / 2)

    def test_empty_degree(self):
        """Test a degree without points."""
        row = lang_trotter_row([], P(1), 4, 2)
        assert row.count == 0
        assert row.partition_ok
        assert row.filter_ratio is None


class TestCounts:
    """Test P_{phi,a}(d) for b = (t, 1, 1) over F_3."""

    def setup_method(self):
        self.module = drinfeld_create(PolynomialRing(3), [[0, 1], [1], [1]])

    def test_finite_module_rejected(self):
        """Test the module must have generic characteristic."""
        module = drinfeld_create(field_create(3, 2), [[0, 1], [1], [1]])
        with pytest.raises(ModuleError):
            lang_trotter_counts(module, P(1), 3)

    def test_trace_over_wrong_field(self):
        """Test a trace over F_2 is rejected for a module over F_3."""
        with pytest.raises(ModuleError):
            lang_trotter_counts(self.module, BasePoly(2, (1,)), 3)

    def test_collector_is_used(self):
        """Test a custom collector supplies the points."""
        calls = []

        def collector(module, d, j):
            calls.append(d)
            return [point(P(1), d=d)]

        rows = lang_trotter_counts(self.module, P(1), 3, d_min=2, collector=collector)
        assert calls == [2, 3]
        assert [r.count for r in rows] == [1, 1]
        assert [r.good_points for r in rows] == [3, 8]
        assert not any(r.partition_ok for r in rows)

    @pytest.mark.slow
    def test_partition_and_ratio_bound(self):
        """Test the partition identity for d <= 7 and ratios for 3 <= d <= 7 within 4x their d = 3 value."""
        cache = {}

        def collector(module, d, j):
            if d not in cache:
                cache[d] = collect_point_traces(module, d, j)
            return cache[d]

        bounded = []
        for a in (BasePoly.zero(3), P(1)):
            rows = lang_trotter_counts(self.module, a, 7, collector=collector)
            assert all(r.partition_ok for r in rows)
            assert all(r.filter_ok for r in rows)
            baseline = rows[2].ratio_bound
            if baseline == 0:
                continue
            assert all(r.ratio_bound <= 4 * baseline for r in rows if r.d >= 3)
            bounded.append(a)
        assert bounded, "no trace in {0, 1} occurs at d = 3"
