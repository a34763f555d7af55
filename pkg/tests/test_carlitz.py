"""Tests for the Carlitz module, its torsion degrees and the Artin-Schreier tower."""

import pytest

import src.drinfeld.carlitz as carlitz_module
from src.algebra.base_ring import BasePoly, irreducible_monics
from src.common.errors import InvariantViolation, TowerCertificationError
from src.drinfeld.carlitz import (
    CyclotomicCheck,
    StepPolynomial,
    TowerElement,
    artin_schreier_tower,
    carlitz,
    carlitz_check,
    carlitz_frobenius_identity,
    cyclotomic_check,
    cyclotomic_degree,
    generated_subgroup_order,
    mobius_poly,
    unit_group_order,
)
from src.drinfeld.module import GENERIC


def P(*coeffs, q=2):
    return BasePoly(q, tuple(coeffs))


class TestCarlitzModule:
    """Test phi_t = t + tau."""

    def test_shape(self):
        """Test rank 1, generic characteristic, b = (t, 1)."""
        module = carlitz(2)
        assert module.rank == 1
        assert module.characteristic == GENERIC
        assert module.coefficients == (BasePoly.t(2), BasePoly.one(2))

    def test_hand_identities(self):
        """Test phi_p = tau^deg p modulo p for t, t + 1 and t^2 + t + 1."""
        for p in (P(0, 1), P(1, 1), P(1, 1, 1)):
            assert carlitz_frobenius_identity(p)

    @pytest.mark.parametrize("q", [2, 3])
    def test_identity_all_primes(self, q):
        """Test the Frobenius identity at every prime of degree <= 6."""
        for d in range(1, 7):
            for p in irreducible_monics(q, d):
                assert carlitz_frobenius_identity(p)

    def test_point_checks(self):
        """Test carlitz_check reports T - p with epsilon 1."""
        for p in irreducible_monics(3, 3):
            check = carlitz_check(p)
            assert check.identity_holds
            assert check.charpoly_is_t_minus_p
            assert check.epsilon == 1


class TestCyclotomic:
    """Test [F(phi[a]) : F] = |(A/a)^x|."""

    def test_degree_of_t(self):
        """Test a = t gives 1."""
        assert cyclotomic_degree(P(0, 1)) == 1

    def test_degree_of_t_squared(self):
        """Test a = t^2 gives 2."""
        assert cyclotomic_degree(P(0, 0, 1)) == 2

    def test_degree_of_quadratic_prime(self):
        """Test a = t^2 + t + 1 gives 3."""
        assert cyclotomic_degree(P(1, 1, 1)) == 3

    def test_unit_group_order(self):
        """Test |(A/a)^x| over F_3 for a = t^2 (t + 1)."""
        a = P(0, 0, 1, q=3) * P(1, 1, q=3)
        assert unit_group_order(a) == 6 * 2

    def test_factorization_consistent(self):
        """Test factor degrees modulo auxiliary primes match the order of the prime."""
        check = cyclotomic_check(P(1, 1, 1))
        assert check.consistent
        assert check.witnessed_irreducible
        assert check.expected_degree == 3
        assert check.primes_checked

    def test_generated_subgroup(self):
        """Test t + 1 has order 3 and t + 2 generates (F_3[t]/t^2)^x."""
        a = P(0, 0, 1, q=3)
        assert generated_subgroup_order([P(1, 1, q=3)], a) == 3
        assert generated_subgroup_order([P(2, 1, q=3)], a) == 6
        assert generated_subgroup_order([], a) == 1

    def test_witnessed_cyclic_group(self):
        """Test a = t^2 over F_3 has a full-degree witness."""
        check = cyclotomic_check(P(0, 0, 1, q=3))
        assert check.expected_degree == 6
        assert check.consistent
        assert check.witnessed_irreducible
        assert cyclotomic_degree(P(0, 0, 1, q=3)) == 6

    def test_witnessed_non_cyclic_group(self):
        """Test a = t (t + 1) over F_3, where (A/a)^x = F_3^x x F_3^x has no generator."""
        a = P(0, 1, q=3) * P(1, 1, q=3)
        check = cyclotomic_check(a)
        assert check.expected_degree == 4
        assert check.witnessed_irreducible
        assert cyclotomic_degree(a) == 4

    def test_missing_witness_raises(self, monkeypatch):
        """Test cyclotomic_degree refuses a check without a full-degree witness."""
        a = P(0, 0, 1, q=3)
        unwitnessed = CyclotomicCheck(a=a, expected_degree=6, primes_checked=(P(1, 1, q=3),))
        monkeypatch.setattr(carlitz_module, "cyclotomic_check", lambda a, max_aux_degree=3: unwitnessed)
        with pytest.raises(InvariantViolation, match="generate"):
            cyclotomic_degree(a)
        assert cyclotomic_degree(a, verify=False) == 6

    def test_mobius_poly(self):
        """Test the Mobius function on F_2[t]."""
        assert mobius_poly(P(0, 1)) == -1
        assert mobius_poly(P(0, 1) * P(1, 1)) == 1
        assert mobius_poly(P(0, 0, 1)) == 0
        assert mobius_poly(BasePoly.one(2)) == 1


class TestArtinSchreierTower:
    """Test the certified tower F(a_j)."""

    @pytest.mark.parametrize("q", [2, 3])
    def test_degrees_through_level_two(self, q):
        """Test [F(a_j) : F] = q^j for j <= 2, each level certified."""
        levels = artin_schreier_tower(q, 2)
        assert [level.degree_over_F for level in levels] == [1, q, q * q]
        assert all(level.certified for level in levels)
        assert levels[0].j == 0 and levels[0].certificate_prime is None

    def test_level_one_certificate_over_f2(self):
        """Test X^2 + X + t is certified at t + 1, where it reduces to X^2 + X + 1."""
        levels = artin_schreier_tower(2, 1)
        assert levels[1].certificate_prime == P(1, 1)
        assert levels[1].residue_chain == ()

    def test_residue_chain_lengths(self):
        """Test level j carries residues of a_1 .. a_{j-1}."""
        levels = artin_schreier_tower(2, 2)
        assert len(levels[2].residue_chain) == 1
        assert levels[2].min_poly_chain == (StepPolynomial.artin_schreier(2, 0), StepPolynomial.artin_schreier(2, 1))
        assert str(levels[2].min_poly_chain[0]) == "X^2 - X + t"

    @pytest.mark.parametrize("q", [2, 3])
    def test_step_polynomials_vanish_on_chain(self, q):
        """Test each step below the top vanishes at the next residue."""
        level = artin_schreier_tower(q, 2)[2]
        t_bar, chain = level.residue_t, level.residue_chain
        first, top = level.min_poly_chain
        assert first.evaluate(chain[0], t_bar, []).is_zero()
        assert level.chain_vanishes()
        assert top.artin_schreier_constant().evaluate(t_bar, chain) == t_bar * chain[0]

    def test_top_step_has_no_root(self):
        """Test the certifying polynomial has no root in the residue field over F_2."""
        level = artin_schreier_tower(2, 2)[2]
        top = level.min_poly_chain[-1]
        ctx = level.residue_t.ctx
        assert all(not top.evaluate(x, level.residue_t, level.residue_chain).is_zero() for x in ctx.elements())

    def test_prime_power_rejected(self):
        """Test q = 4 is not certifiable."""
        with pytest.raises(TowerCertificationError):
            artin_schreier_tower(4, 1)


class TestTowerRing:
    """Test R_i = A[a_1..a_i] with a_k^q = a_k - t a_(k-1)."""

    def setup_method(self):
        self.t1 = TowerElement.constant(BasePoly.t(3), 1)
        self.t2 = TowerElement.constant(BasePoly.t(3), 2)

    def test_first_generator_relation(self):
        """Test a_1^3 = a_1 - t in R_1 over F_3."""
        a1 = TowerElement.generator(3, 1, 1)
        assert a1 * a1 * a1 == a1 - self.t1

    def test_second_generator_relation(self):
        """Test a_2^3 - a_2 + t a_1 vanishes in R_2."""
        a1, a2 = TowerElement.generator(3, 2, 1), TowerElement.generator(3, 2, 2)
        assert (a2 * a2 * a2 - a2 + self.t2 * a1).is_zero()

    def test_lift(self):
        """Test a_1 keeps its meaning one level up."""
        assert TowerElement.generator(3, 1, 1).lift(2) == TowerElement.generator(3, 2, 1)
        with pytest.raises(ValueError):
            TowerElement.generator(3, 2, 1).lift(1)

    def test_level_mismatch(self):
        """Test elements of different levels do not combine."""
        with pytest.raises(TypeError):
            self.t1 + self.t2

    def test_step_shape(self):
        """Test X^3 - X + t a_1 has the expected dense coefficients."""
        step = StepPolynomial.artin_schreier(3, 1)
        assert step.degree == 3
        assert step.artin_schreier_constant() == self.t1 * TowerElement.generator(3, 1, 1)
        assert step.coeffs[2].is_zero()

    def test_non_artin_schreier_rejected(self):
        """Test a polynomial not of the form X^q - X + c is rejected."""
        one = TowerElement.constant(BasePoly.one(3), 0)
        with pytest.raises(ValueError):
            StepPolynomial(0, (one, one)).artin_schreier_constant()
