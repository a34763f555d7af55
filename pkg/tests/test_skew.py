"""Tests for twisted polynomials and truncated tau^-1 series."""

import math
import random

import pytest

from src.algebra.base_ring import BasePoly, PolynomialRing
from src.algebra.finite_field import field_create
from src.algebra.skew import (
    SkewLaurentTrunc,
    SkewPoly,
    commutes,
    ord_tau_inv,
    skew_apply,
    skew_right_divmod,
)
from src.common.errors import ContextMismatch, DivisionByZero


def random_skew(ctx, rng, max_degree=4):
    return SkewPoly(ctx, [ctx.random_element(rng) for _ in range(rng.randrange(max_degree + 1) + 1)])


def random_unit_series(ctx, rng, prec=8):
    coeffs = [ctx.random_element(rng) for _ in range(prec)]
    while not coeffs[0]:
        coeffs[0] = ctx.random_element(rng)
    return SkewLaurentTrunc(ctx, rng.randrange(-2, 3), coeffs)


class TestSkewPoly:
    """Test the commutation rule and ring axioms of L[tau]."""

    def setup_method(self):
        self.f2 = field_create(2, 1)
        self.f4 = field_create(2, 2)
        self.w = self.f4.element([0, 1])
        self.rng = random.Random(2718)

    def test_commutation_rule(self):
        """Test tau * w = w^2 * tau."""
        tau = SkewPoly.tau(self.f4)
        product = tau * SkewPoly.constant(self.f4, self.w)
        assert product == SkewPoly(self.f4, [self.f4.zero, self.w.frobenius(1)])

    def test_composition_oracle(self):
        """Test (1 + tau)^2 = 1 + tau^2 over F_2."""
        f = SkewPoly(self.f2, [self.f2.one, self.f2.one])
        assert f * f == SkewPoly(self.f2, [self.f2.one, self.f2.zero, self.f2.one])

    def test_multiply_by_one(self):
        """Test f * 1 = f."""
        f = random_skew(self.f4, self.rng)
        assert f * SkewPoly.one(self.f4) == f

    def test_ring_axioms(self):
        """Test associativity and distributivity on random triples over F_9."""
        ctx = field_create(3, 2)
        for _ in range(200):
            a, b, c = (random_skew(ctx, self.rng) for _ in range(3))
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            assert (a + b) * c == a * c + b * c

    def test_degree_additive(self):
        """Test deg(fg) = deg f + deg g over a field."""
        for _ in range(200):
            f, g = random_skew(self.f4, self.rng), random_skew(self.f4, self.rng)
            if f.is_zero() or g.is_zero():
                continue
            assert (f * g).degree == f.degree + g.degree

    def test_apply_is_composition(self):
        """Test evaluating a product composes the additive polynomials."""
        ctx = field_create(2, 4)
        for _ in range(50):
            f, g = random_skew(self.f4, self.rng), random_skew(self.f4, self.rng)
            x = ctx.random_element(self.rng)
            assert skew_apply(f * g, x) == skew_apply(f, skew_apply(g, x))

    def test_context_mismatch(self):
        """Test combining different coefficient fields raises."""
        with pytest.raises(ContextMismatch):
            _ = SkewPoly.one(self.f4) + SkewPoly.one(field_create(2, 3))

    def test_polynomial_ring_coefficients(self):
        """Test tau * t = t^q * tau over F_2[t]."""
        ring = PolynomialRing(2)
        t = BasePoly.t(2)
        product = SkewPoly.tau(ring) * SkewPoly.constant(ring, t)
        assert product.coefficient(1) == t**2


class TestSkewDivision:
    """Test right Euclidean division."""

    def setup_method(self):
        self.f2 = field_create(2, 1)
        self.rng = random.Random(31)

    def test_hand_example(self):
        """Test tau^2 = (tau + 1)(tau + 1) + 1 over F_2."""
        one, zero = self.f2.one, self.f2.zero
        f = SkewPoly(self.f2, [zero, zero, one])
        g = SkewPoly(self.f2, [one, one])
        quotient, remainder = skew_right_divmod(f, g)
        assert quotient == g
        assert remainder == SkewPoly.one(self.f2)

    def test_divide_by_one(self):
        """Test g = 1 gives (f, 0)."""
        f = random_skew(self.f2, self.rng)
        assert skew_right_divmod(f, SkewPoly.one(self.f2)) == (f, SkewPoly.zero(self.f2))

    def test_small_dividend(self):
        """Test deg f < deg g gives (0, f)."""
        f = SkewPoly.one(self.f2)
        g = SkewPoly.tau(self.f2, 2)
        assert skew_right_divmod(f, g) == (SkewPoly.zero(self.f2), f)

    def test_division_identity_random(self):
        """Test f = quotient * g + remainder on random pairs over F_9."""
        ctx = field_create(3, 2)
        for _ in range(200):
            f, g = random_skew(ctx, self.rng, 6), random_skew(ctx, self.rng, 3)
            if g.is_zero():
                continue
            quotient, remainder = skew_right_divmod(f, g)
            assert quotient * g + remainder == f
            assert remainder.degree < g.degree

    def test_zero_divisor(self):
        """Test division by zero raises."""
        with pytest.raises(DivisionByZero):
            skew_right_divmod(SkewPoly.one(self.f2), SkewPoly.zero(self.f2))


class TestSkewApply:
    """Test evaluation as additive polynomials."""

    def setup_method(self):
        self.f4 = field_create(2, 2)
        self.w = self.f4.element([0, 1])

    def test_tau_is_frobenius(self):
        """Test tau(x) = x^q."""
        assert skew_apply(SkewPoly.tau(self.f4), self.w) == self.w**2

    def test_carlitz_at_one(self):
        """Test (w + tau)(1) = w + 1."""
        phi_t = SkewPoly(self.f4, [self.w, self.f4.one])
        assert skew_apply(phi_t, self.f4.one) == self.w + self.f4.one

    def test_zero(self):
        """Test the zero polynomial evaluates to zero."""
        assert skew_apply(SkewPoly.zero(self.f4), self.w).is_zero()


class TestSkewLaurent:
    """Test the tau^-1 series ring."""

    def setup_method(self):
        self.f4 = field_create(2, 2)
        self.w = self.f4.element([0, 1])
        self.rng = random.Random(1618)

    def test_ord_of_tau_power(self):
        """Test ord(tau^h) = -h."""
        assert ord_tau_inv(SkewLaurentTrunc.tau(self.f4, 3, 5)) == -3
        assert ord_tau_inv(SkewLaurentTrunc(self.f4, 0, [])) == math.inf

    def test_inverse_commutation(self):
        """Test tau^-1 * a = a^(1/q) * tau^-1."""
        tau_inv = SkewLaurentTrunc.tau(self.f4, -1, 6)
        lhs = tau_inv * SkewLaurentTrunc.constant(self.w, 6)
        rhs = SkewLaurentTrunc.constant(self.w.frobenius(-1), 6) * tau_inv
        assert lhs.equals_to_precision(rhs)

    def test_inverse_random(self):
        """Test x * inv(x) and inv(x) * x are 1 to precision over F_16."""
        ctx = field_create(2, 4)
        for _ in range(200):
            x = random_unit_series(ctx, self.rng)
            one = SkewLaurentTrunc.constant(ctx.one, x.precision)
            assert (x * x.inverse()).equals_to_precision(one)
            assert (x.inverse() * x).equals_to_precision(one)

    def test_associativity_random(self):
        """Test associativity of truncated products."""
        for _ in range(200):
            a, b, c = (random_unit_series(self.f4, self.rng) for _ in range(3))
            assert ((a * b) * c).equals_to_precision(a * (b * c))

    def test_valuation_additive(self):
        """Test ord(xy) = ord(x) + ord(y) for units."""
        for _ in range(200):
            a, b = random_unit_series(self.f4, self.rng), random_unit_series(self.f4, self.rng)
            assert ord_tau_inv(a * b) == ord_tau_inv(a) + ord_tau_inv(b)


class TestCommutes:
    """Test centralizer membership."""

    def setup_method(self):
        self.f4 = field_create(2, 2)
        self.w = self.f4.element([0, 1])

    def test_self(self):
        """Test f commutes with itself."""
        f = SkewPoly(self.f4, [self.w, self.f4.one, self.w])
        assert commutes(f, f)

    def test_tau_and_non_fixed_constant(self):
        """Test tau does not commute with w in F_4 minus F_2."""
        assert not commutes(SkewPoly.tau(self.f4), self.w)

    def test_tau_h_and_fixed_constant(self):
        """Test tau^2 commutes with every constant of F_4."""
        for c in self.f4.elements():
            assert commutes(SkewPoly.tau(self.f4, 2), c)

    def test_series(self):
        """Test tau^2 commutes with a constant series to precision."""
        series = SkewLaurentTrunc.constant(self.w, 6)
        assert commutes(SkewLaurentTrunc.tau(self.f4, 2, 6), series)
