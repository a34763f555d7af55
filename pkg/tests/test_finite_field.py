"""Tests for finite field contexts, Frobenius, trace/norm and Artin-Schreier roots."""

import random

import pytest

from src.algebra.finite_field import (
    absolute_trace,
    conjugates,
    embed,
    ff_arith,
    field_create,
    frobenius_power,
    relative_trace_norm,
    solve_additive,
    solve_artin_schreier,
)
from src.common.errors import (
    ContextMismatch,
    IncompatibleDegrees,
    NotADivisor,
    ReducibleModulus,
    ZeroInverse,
)


class TestFieldCreate:
    """Test deterministic modulus selection."""

    def test_prime_field_modulus(self):
        """Test F_2 is presented by the modulus X."""
        ctx = field_create(2, 1)
        assert ctx.modulus == (0, 1)
        assert ctx.d == 1

    def test_least_quadratic_modulus(self):
        """Test F_4 uses X^2 + X + 1."""
        assert field_create(2, 2).modulus == (1, 1, 1)

    def test_reducible_modulus_rejected(self):
        """Test X^2 + 1 over F_2 raises ReducibleModulus."""
        with pytest.raises(ReducibleModulus):
            field_create(2, 2, modulus=[1, 0, 1])

    def test_non_monic_modulus_rejected(self):
        """Test a modulus of the wrong shape raises ReducibleModulus."""
        with pytest.raises(ReducibleModulus):
            field_create(3, 2, modulus=[1, 0, 2])

    def test_contexts_are_cached(self):
        """Test equal parameters return the same context."""
        assert field_create(3, 2) is field_create(3, 2)

    def test_element_count(self):
        """Test elements() enumerates the whole field, zero first."""
        ctx = field_create(3, 2)
        elements = list(ctx.elements())
        assert len(elements) == 9
        assert len(set(elements)) == 9
        assert elements[0].is_zero()


class TestArithmetic:
    """Test field arithmetic in F_4 and random fields."""

    def setup_method(self):
        """Set up F_4 = F_2(w)."""
        self.ctx = field_create(2, 2)
        self.w = self.ctx.element([0, 1])
        self.rng = random.Random(20240501)

    def test_omega_squared(self):
        """Test w * w = w + 1."""
        assert self.w * self.w == self.w + self.ctx.one

    def test_inverse_of_one(self):
        """Test inv(1) = 1."""
        assert ff_arith("inv", self.ctx.one) == self.ctx.one

    def test_multiply_by_zero(self):
        """Test x * 0 = 0."""
        assert ff_arith("mul", self.w, self.ctx.zero).is_zero()

    def test_inverse_of_zero(self):
        """Test inverting zero raises ZeroInverse."""
        with pytest.raises(ZeroInverse):
            self.ctx.zero.inverse()

    def test_pow_dispatch(self):
        """Test pow by the group order gives one."""
        assert ff_arith("pow", self.w, 3).is_one()

    def test_context_mismatch(self):
        """Test mixing fields raises ContextMismatch."""
        other = field_create(2, 3).one
        with pytest.raises(ContextMismatch):
            _ = self.w + other

    def test_field_axioms_random(self):
        """Test distributivity and inverses on random elements of F_27 and F_16."""
        for ctx in (field_create(3, 3), field_create(2, 4)):
            for _ in range(100):
                a, b, c = (ctx.random_element(self.rng) for _ in range(3))
                assert a * (b + c) == a * b + a * c
                assert (a * b) * c == a * (b * c)
                if a:
                    assert (a * a.inverse()).is_one()


class TestFrobenius:
    """Test the q-power Frobenius."""

    def setup_method(self):
        self.ctx = field_create(2, 2)
        self.w = self.ctx.element([0, 1])
        self.rng = random.Random(7)

    def test_fixes_base_field(self):
        """Test F_q is fixed by every power."""
        for i in range(-3, 4):
            assert frobenius_power(self.ctx.one, i) == self.ctx.one

    def test_omega(self):
        """Test w^2 = w + 1."""
        assert frobenius_power(self.w, 1) == self.w + self.ctx.one

    def test_inverse_power(self):
        """Test Frobenius and its inverse cancel."""
        ctx = field_create(3, 4)
        for _ in range(50):
            x = ctx.random_element(self.rng)
            assert frobenius_power(frobenius_power(x, 1), -1) == x
            assert frobenius_power(x, ctx.d) == x

    def test_matches_power_map(self):
        """Test frobenius(1) agrees with x ** q."""
        ctx = field_create(3, 3)
        for _ in range(50):
            x = ctx.random_element(self.rng)
            assert x.frobenius(1) == x**3


class TestTraceNorm:
    """Test relative trace and norm."""

    def setup_method(self):
        self.ctx = field_create(2, 2)
        self.w = self.ctx.element([0, 1])
        self.rng = random.Random(11)

    def test_trivial_values(self):
        """Test trace(0) = 0 and norm(1) = 1."""
        assert relative_trace_norm(self.ctx.zero, 1)[0].is_zero()
        assert relative_trace_norm(self.ctx.one, 1)[1].is_one()

    def test_trace_of_omega(self):
        """Test Tr(w) = 1."""
        assert absolute_trace(self.w) == 1

    def test_trace_zero_units(self):
        """Test exactly one unit of F_4 has trace zero."""
        units = [x for x in self.ctx.elements() if x]
        assert sum(1 for x in units if absolute_trace(x) == 0) == 1

    def test_not_a_divisor(self):
        """Test a non-dividing subfield degree raises NotADivisor."""
        with pytest.raises(NotADivisor):
            conjugates(field_create(2, 3).one, 2)

    def test_multiplicativity(self):
        """Test the norm is multiplicative and the trace additive on random pairs."""
        ctx = field_create(3, 4)
        for _ in range(200):
            x, y = ctx.random_element(self.rng), ctx.random_element(self.rng)
            tx, nx = relative_trace_norm(x, 2)
            ty, ny = relative_trace_norm(y, 2)
            txy, _ = relative_trace_norm(x + y, 2)
            _, nxy = relative_trace_norm(x * y, 2)
            assert nxy == nx * ny
            assert txy == tx + ty
            assert nx.in_subfield(2)


class TestEmbed:
    """Test embeddings between extensions."""

    def setup_method(self):
        self.f4 = field_create(2, 2)
        self.f16 = field_create(2, 4)
        self.rng = random.Random(3)

    def test_one(self):
        """Test embed(1) = 1."""
        assert embed(self.f4.one, self.f16).is_one()

    def test_homomorphism(self):
        """Test embed respects sums and products."""
        for _ in range(100):
            a, b = self.f4.random_element(self.rng), self.f4.random_element(self.rng)
            assert embed(a + b, self.f16) == embed(a, self.f16) + embed(b, self.f16)
            assert embed(a * b, self.f16) == embed(a, self.f16) * embed(b, self.f16)

    def test_trace_transitivity(self):
        """Test Tr_{16/2} = Tr_{4/2} composed with Tr_{16/4} on every element."""
        for x in self.f16.elements():
            t16_4, _ = relative_trace_norm(x, 2)
            assert t16_4.in_subfield(2)
            assert relative_trace_norm(x, 1)[0] == t16_4 + t16_4.frobenius(1)

    def test_incompatible_degrees(self):
        """Test F_8 does not embed in F_16."""
        with pytest.raises(IncompatibleDegrees):
            embed(field_create(2, 3).one, self.f16)


class TestArtinSchreier:
    """Test roots of x^{q^h} - x + c."""

    def test_kernel(self):
        """Test c = 0 over F_2 gives {0, 1}."""
        f2 = field_create(2, 1)
        roots = solve_artin_schreier(1, f2.zero)
        assert roots == [f2.zero, f2.one]

    def test_roots_in_extension(self):
        """Test c = 1 over F_2 gives w and w + 1 in F_4."""
        roots = solve_artin_schreier(1, field_create(2, 1).one)
        f4 = field_create(2, 2)
        w = f4.element([0, 1])
        assert set(roots) == {w, w + f4.one}
        assert all(r.ctx == f4 for r in roots)

    def test_root_count_and_validity(self):
        """Test there are q^h roots, each solving the equation."""
        rng = random.Random(5)
        ctx = field_create(3, 2)
        for h in (1, 2):
            for _ in range(10):
                c = ctx.random_element(rng)
                roots = solve_artin_schreier(h, c)
                assert len(roots) == 3**h
                for r in roots:
                    cc = embed(c, r.ctx)
                    assert (r.frobenius(h) - r + cc).is_zero()

    def test_solve_additive_no_solution(self):
        """Test x^2 - x = 1 has no solution in F_2."""
        f2 = field_create(2, 1)
        assert solve_additive(f2, 1, f2.one, f2.one) is None

    def test_bad_h(self):
        """Test h must be positive."""
        with pytest.raises(ValueError):
            solve_artin_schreier(0, field_create(2, 1).one)
