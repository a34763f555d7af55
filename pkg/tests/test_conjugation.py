"""Tests for the u-series conjugating phi_y into constant-coefficient series."""

import pytest

from src.algebra.base_ring import BasePoly, PolynomialRing
from src.algebra.finite_field import embed, field_create
from src.algebra.skew import SkewLaurentTrunc, ord_tau_inv
from src.common.errors import ModuleError
from src.drinfeld.conjugation import (
    conjugate,
    conjugate_to_constants,
    frobenius_in_constants,
    in_constants,
)
from src.drinfeld.module import drinfeld_create, phi_eval

W = [0, 1]
W1 = [1, 1]
ONE = [1]

RANK_TWO_OVER_F4 = [
    [W, ONE, ONE],
    [W, [0], ONE],
    [W1, W, ONE],
    [W, ONE, W],
    [ONE, W, W1],
]


class TestConjugateToConstants:
    """Test phi_y u = u tau^h to precision."""

    def setup_method(self):
        self.f4 = field_create(2, 2)
        self.t = BasePoly.t(2)

    @pytest.mark.parametrize("coeffs", RANK_TWO_OVER_F4)
    def test_identity_at_precision_twelve(self, coeffs):
        """Test all twelve checked tau-coefficients of phi_t u - u tau^2 vanish."""
        module = drinfeld_create(self.f4, coeffs)
        u = conjugate_to_constants(module, self.t, 12)
        h = 2
        assert u.precision == 12
        assert ord_tau_inv(u) == 0
        phi_y = phi_eval(module, self.t)
        lhs = SkewLaurentTrunc.from_poly(phi_y, 12 + h).embed_into(u.ctx) * u
        rhs = u * SkewLaurentTrunc.tau(u.ctx, h, 12 + h)
        difference = lhs - rhs
        assert difference.is_zero()
        assert difference.floor <= h - 12

    @pytest.mark.parametrize("coeffs", RANK_TWO_OVER_F4)
    def test_delta_normalization(self, coeffs):
        """Test the leading coefficient delta satisfies delta^(q^h - 1) b_h = 1."""
        module = drinfeld_create(self.f4, coeffs)
        u = conjugate_to_constants(module, self.t, 4)
        delta = u.coefficient(0)
        b_h = embed(module.phi_t.leading(), u.ctx)
        assert (delta ** (2**2 - 1) * b_h).is_one()

    def test_constant_module(self):
        """Test phi_t = tau^2 is conjugated by a constant."""
        module = drinfeld_create(self.f4, [[0], [0], ONE])
        u = conjugate_to_constants(module, self.t, 6)
        assert all(c.is_zero() for c in u.coeffs[1:])
        assert in_constants(u, 2)

    def test_conjugate_is_tau_h(self):
        """Test u^-1 phi_t u = tau^2 to precision."""
        module = drinfeld_create(self.f4, RANK_TWO_OVER_F4[0])
        u = conjugate_to_constants(module, self.t, 8)
        image = conjugate(module, u, self.t)
        assert image.equals_to_precision(SkewLaurentTrunc.tau(u.ctx, 2, 8))

    def test_frobenius_lands_in_constants(self):
        """Test u^-1 tau^m u has coefficients in F_{q^h}."""
        module = drinfeld_create(self.f4, RANK_TWO_OVER_F4[0])
        result = frobenius_in_constants(module, self.t, 8)
        assert result.m == 2
        assert result.h == 2
        assert result.in_constants

    def test_generic_module_rejected(self):
        """Test a module over F_q(t) is rejected."""
        module = drinfeld_create(PolynomialRing(2), [[0, 1], [1], [1]])
        with pytest.raises(ModuleError):
            conjugate_to_constants(module, self.t, 4)

    def test_constant_y_rejected(self):
        """Test y must be nonconstant."""
        module = drinfeld_create(self.f4, RANK_TWO_OVER_F4[0])
        with pytest.raises(ModuleError):
            conjugate_to_constants(module, BasePoly.one(2), 4)
