"""Tests for characteristic polynomials of Frobenius."""

import pytest

from src.algebra.base_ring import BasePoly, PolynomialRing, irreducible_monics
from src.common.schema import CharPolyRecordModel
from src.drinfeld.carlitz import carlitz
from src.drinfeld.frobenius import (
    CharPolyRecord,
    charpoly_at,
    degree_bounds,
    frob_charpoly,
    hasse_check,
    skew_identity,
    trace_of_frobenius,
)
from src.drinfeld.module import drinfeld_create, reduce_at


def P(*coeffs, q=2):
    return BasePoly(q, tuple(coeffs))


class TestCarlitzCharpoly:
    """Test P(T) = T - p for the Carlitz module at every small prime."""

    def test_hand_examples(self):
        """Test Carlitz at t and at t^2 + t + 1 over F_2."""
        module = carlitz(2)
        for p in (P(0, 1), P(1, 1, 1)):
            record = charpoly_at(module, p)
            assert record.c == (-p,)
            assert record.a_x == p

    @pytest.mark.parametrize("q", [2, 3])
    def test_frobenius_identity_all_primes(self, q):
        """Test the charpoly is T - p with epsilon 1 for every p of degree <= 6."""
        module = carlitz(q)
        for d in range(1, 7):
            for p in irreducible_monics(q, d):
                record = charpoly_at(module, p)
                assert record.c == (-p,)
                assert record.epsilon == 1
                assert record.hasse_ok


class TestRankTwoCharpoly:
    """Test the rank-2 module phi_t = t + tau + tau^2 over F_2."""

    def setup_method(self):
        self.module = drinfeld_create(PolynomialRing(2), [[0, 1], [1], [1]])

    def test_anchor_at_t(self):
        """Test P(T) = T^2 + T + t at p = t."""
        record = charpoly_at(self.module, P(0, 1))
        assert record.c == (P(0, 1), P(1))
        assert record.a_x == P(1)
        assert trace_of_frobenius(reduce_at(self.module, P(0, 1))) == P(1)

    def test_all_primes_to_degree_seven(self):
        """Test skew identity, Hasse bound and c_0 = eps * p for every p of degree <= 7."""
        for d in range(1, 8):
            for p in irreducible_monics(2, d):
                reduced = reduce_at(self.module, p)
                record = frob_charpoly(reduced)
                assert skew_identity(reduced, list(record.c)).is_zero()
                assert 2 * record.a_x.degree <= d
                assert record.hasse_ok
                assert record.epsilon == 1
                assert record.c[0] == p

    def test_degree_bounds(self):
        """Test ceil((n - i) m / n)."""
        assert degree_bounds(2, 5) == [5, 3]
        assert degree_bounds(3, 4) == [4, 3, 2]

    def test_over_f4_characteristic(self):
        """Test a module over F_4 with b_0 = w gets a charpoly over the point t^2 + t + 1."""
        from src.algebra.finite_field import field_create

        module = drinfeld_create(field_create(2, 2), [[0, 1], [1], [1]])
        record = frob_charpoly(module)
        assert record.p == P(1, 1, 1)
        assert skew_identity(module, list(record.c)).is_zero()


class TestHasseCheck:
    """Test the Hasse bound predicate."""

    def _record(self, a_x, m, n=2):
        c = tuple([BasePoly.zero(2)] * (n - 1) + [-a_x])
        return CharPolyRecord(p=P(0, 1), m=m, n=n, c=c, a_x=a_x)

    def test_zero_trace(self):
        """Test a_x = 0 passes."""
        assert hasse_check(self._record(BasePoly.zero(2), 1))

    def test_constant_trace(self):
        """Test a constant trace at m = 1 passes."""
        assert hasse_check(self._record(P(1), 1))

    def test_synthetic_failure(self):
        """Test deg a_x = m fails for n >= 2."""
        assert not hasse_check(self._record(P(1, 0, 1), 2))


class TestCharPolyRecordModel:
    """Test record serialization."""

    def test_round_trip(self):
        """Test to_model / from_model recovers the record."""
        module = drinfeld_create(PolynomialRing(3), [[0, 1], [1], [1]])
        record = charpoly_at(module, P(1, 0, 1, q=3))
        model = CharPolyRecordModel.model_validate(record.to_model().model_dump())
        assert CharPolyRecord.from_model(model, 3) == record
