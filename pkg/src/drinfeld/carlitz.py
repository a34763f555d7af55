"""The Carlitz module phi_t = t + tau: Frobenius identity, torsion degrees, and the
Artin-Schreier tower a_{j+1}^q - a_{j+1} = -t a_j."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

import galois
import structlog

from ..algebra.base_ring import BasePoly, PolynomialRing, irreducible_monics
from ..algebra.finite_field import FFElem, embed, field_create, solve_additive, solve_artin_schreier
from ..algebra.skew import SkewPoly
from ..common.errors import (
    FieldDegreeCapExceeded,
    InvariantViolation,
    TowerCertificationError,
)
from .frobenius import frob_charpoly
from .module import DrinfeldModule, drinfeld_create, phi_eval, reduce_at

logger = structlog.get_logger(__name__)


def carlitz(q: int) -> DrinfeldModule:
    """phi_t = t + tau over F_q(t)."""
    return drinfeld_create(PolynomialRing(q), [BasePoly.t(q), BasePoly.one(q)])


def carlitz_frobenius_identity(p: BasePoly) -> bool:
    """Whether phi_p reduces to tau^(deg p) modulo p."""
    reduced = reduce_at(carlitz(p.q), p)
    return phi_eval(reduced, p) == SkewPoly.tau(reduced.coefficient_field, p.degree)


@dataclass(frozen=True)
class CarlitzPointCheck:
    """Frobenius identity and charpoly at one prime."""

    prime: BasePoly
    identity_holds: bool
    charpoly_is_t_minus_p: bool
    epsilon: Optional[int]


def carlitz_check(p: BasePoly) -> CarlitzPointCheck:
    record = frob_charpoly(reduce_at(carlitz(p.q), p))
    return CarlitzPointCheck(
        prime=p,
        identity_holds=carlitz_frobenius_identity(p),
        charpoly_is_t_minus_p=record.c == (-p,),
        epsilon=record.epsilon,
    )


# torsion fields


def unit_group_order(a: BasePoly) -> int:
    """|(A/a)^x| from the factorization of a."""
    if a.is_zero():
        raise ValueError("a must be nonzero")
    order = 1
    for p, e in a.factor():
        size = a.q**p.degree
        order *= (size - 1) * size ** (e - 1)
    return order


def _multiplicative_order(x: BasePoly, a: BasePoly, bound: int) -> int:
    power = x % a
    one = BasePoly.one(a.q) % a
    for k in range(1, bound + 1):
        if power == one:
            return k
        power = (power * x) % a
    raise InvariantViolation(f"{x!r} has no order dividing {bound} modulo {a!r}")


@dataclass(frozen=True)
class CyclotomicCheck:
    """Factor degrees of the primitive a-torsion polynomial modulo auxiliary primes."""

    a: BasePoly
    expected_degree: int
    primes_checked: tuple[BasePoly, ...] = ()
    consistent: bool = True
    witnessed_irreducible: bool = False


def _dense_torsion_poly(a: BasePoly, ell: BasePoly, gf: type[galois.FieldArray]) -> galois.Poly:
    """phi_a(X) for the Carlitz module, coefficients reduced modulo ell."""
    q = a.q
    phi_a = phi_eval(carlitz(q), a)
    degree = q**phi_a.degree
    coeffs = [0] * (degree + 1)
    for i, c in enumerate(phi_a.coeffs):
        residue = c % ell
        coeffs[q**i] = sum(int(d) * q**k for k, d in enumerate(residue.coeffs))
    return galois.Poly(coeffs, field=gf, order="asc")


def _primitive_torsion_poly(a: BasePoly, ell: BasePoly) -> galois.Poly:
    q = a.q
    if ell.degree == 1:
        gf = galois.GF(q)
    else:
        modulus = galois.Poly(list(ell.coeffs), field=galois.GF(q), order="asc")
        gf = galois.GF(q**ell.degree, irreducible_poly=modulus)
    numerator = galois.Poly([1], field=gf)
    denominator = galois.Poly([1], field=gf)
    for b in _monic_divisors(a):
        mu = mobius_poly(a // b)
        if mu == 1:
            numerator = numerator * _dense_torsion_poly(b, ell, gf)
        elif mu == -1:
            denominator = denominator * _dense_torsion_poly(b, ell, gf)
    quotient, remainder = divmod(numerator, denominator)
    if remainder != galois.Poly.Zero(gf):
        raise InvariantViolation(f"torsion polynomials do not divide for {a!r}")
    return quotient


def _monic_divisors(a: BasePoly) -> Iterator[BasePoly]:
    factors = a.factor()
    exponents = [range(e + 1) for _, e in factors]
    for choice in itertools.product(*exponents):
        b = BasePoly.one(a.q)
        for (p, _), k in zip(factors, choice):
            b = b * p**k
        yield b


def mobius_poly(a: BasePoly) -> int:
    """Mobius function on F_q[t]: zero on non-squarefree, else (-1)^(number of primes)."""
    factors = a.factor()
    if any(e > 1 for _, e in factors):
        return 0
    return -1 if len(factors) % 2 else 1


def generated_subgroup_order(generators: Sequence[BasePoly], a: BasePoly) -> int:
    """Size of the subgroup of (A/a)^x generated by the residues of generators."""
    one = BasePoly.one(a.q) % a
    seen = {one}
    frontier = [one]
    residues = [g % a for g in generators]
    while frontier:
        x = frontier.pop()
        for g in residues:
            y = (x * g) % a
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return len(seen)


def cyclotomic_check(a: BasePoly, max_aux_degree: int = 3) -> CyclotomicCheck:
    """Compare factor degrees of Psi_a modulo ell with the order of ell in (A/a)^x.

    Psi_a = prod_{b | a} phi_b(X)^mu(a/b) is the primitive a-torsion polynomial.
    Frob_ell acts on phi[a] as ell mod a, so once the checked ell generate
    (A/a)^x the Galois group is all of it and Psi_a is irreducible over F_q(t).
    """
    q = a.q
    a = a.monic()
    expected = unit_group_order(a)
    checked: list[BasePoly] = []
    consistent = True
    for d in range(1, max_aux_degree + 1):
        for ell in irreducible_monics(q, d):
            if ell.divides(a):
                continue
            order = _multiplicative_order(ell, a, expected)
            psi = _primitive_torsion_poly(a, ell)
            factors, multiplicities = psi.factors()
            degrees = [int(f.degree) for f in factors]
            if any(int(e) != 1 for e in multiplicities) or any(deg != order for deg in degrees):
                consistent = False
                logger.error("Cyclotomic factor degrees disagree", a=str(a), ell=str(ell), order=order, degrees=degrees)
            checked.append(ell)
    witnessed = generated_subgroup_order(checked, a) == expected
    return CyclotomicCheck(
        a=a,
        expected_degree=expected,
        primes_checked=tuple(checked),
        consistent=consistent,
        witnessed_irreducible=witnessed,
    )


def cyclotomic_degree(a: BasePoly, verify: bool = True) -> int:
    """[F(phi[a]) : F] = |(A/a)^x|; cross-checked by factoring for small q and deg a."""
    expected = unit_group_order(a)
    if verify and a.q <= 3 and a.degree <= 2 and a.degree >= 1:
        check = cyclotomic_check(a)
        if not check.consistent:
            raise InvariantViolation(f"torsion polynomial factorization contradicts |(A/a)^x| for {a!r}")
        if not check.witnessed_irreducible:
            raise InvariantViolation(f"auxiliary primes do not generate (A/a)^x for {a!r}; no full-degree witness")
    return expected


# the Artin-Schreier tower

Monomial = tuple[int, ...]


def _reduce_terms(
    q: int, level: int, terms: Sequence[tuple[Monomial, BasePoly]]
) -> tuple[tuple[Monomial, BasePoly], ...]:
    """Collect terms on the basis with exponents below q, rewriting a_k^q = a_k - t a_{k-1}."""
    t = BasePoly.t(q)
    work = list(terms)
    collected: dict[Monomial, BasePoly] = {}
    while work:
        exps, c = work.pop()
        if len(exps) != level:
            raise ValueError(f"monomial {exps} does not live at level {level}")
        if c.is_zero():
            continue
        k = next((i for i, e in enumerate(exps) if e >= q), None)
        if k is None:
            collected[exps] = collected.get(exps, BasePoly.zero(q)) + c
            continue
        lowered = list(exps)
        lowered[k] -= q - 1
        shifted = list(exps)
        shifted[k] -= q
        if k > 0:
            shifted[k - 1] += 1
        work.append((tuple(lowered), c))
        work.append((tuple(shifted), -(t * c)))
    return tuple(sorted(((e, c) for e, c in collected.items() if not c.is_zero()), key=lambda item: item[0]))


@dataclass(frozen=True)
class TowerElement:
    """Element of R_i = A[a_1..a_i] on the basis a_1^e_1 ... a_i^e_i with 0 <= e_k < q.

    R_i is A[X_1..X_i] modulo X_k^q - X_k + t X_{k-1}, where X_0 = 1.
    """

    q: int
    level: int
    terms: tuple[tuple[Monomial, BasePoly], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", _reduce_terms(self.q, self.level, self.terms))

    @classmethod
    def constant(cls, c: BasePoly, level: int) -> TowerElement:
        return cls(c.q, level, (((0,) * level, c),))

    @classmethod
    def generator(cls, q: int, level: int, k: int) -> TowerElement:
        """a_k in R_level; a_0 is 1."""
        if not 0 <= k <= level:
            raise ValueError(f"a_{k} is not in level {level}")
        exps = tuple(1 if i == k - 1 else 0 for i in range(level))
        return cls(q, level, ((exps, BasePoly.one(q)),))

    def is_zero(self) -> bool:
        return not self.terms

    def lift(self, level: int) -> TowerElement:
        if level < self.level:
            raise ValueError(f"cannot lower level {self.level} to {level}")
        pad = (0,) * (level - self.level)
        return TowerElement(self.q, level, tuple((e + pad, c) for e, c in self.terms))

    def _check(self, other: object) -> TowerElement:
        if not isinstance(other, TowerElement) or other.q != self.q or other.level != self.level:
            raise TypeError(f"cannot combine level {self.level} tower element with {other!r}")
        return other

    def __add__(self, other: object) -> TowerElement:
        o = self._check(other)
        return TowerElement(self.q, self.level, self.terms + o.terms)

    def __neg__(self) -> TowerElement:
        return TowerElement(self.q, self.level, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: object) -> TowerElement:
        return self + -self._check(other)

    def __mul__(self, other: object) -> TowerElement:
        o = self._check(other)
        products = [
            (tuple(x + y for x, y in zip(ea, eb)), ca * cb) for ea, ca in self.terms for eb, cb in o.terms
        ]
        return TowerElement(self.q, self.level, tuple(products))

    def evaluate(self, t_bar: FFElem, residues: Sequence[FFElem]) -> FFElem:
        """Image under t -> t_bar and a_k -> residues[k - 1], all in one field."""
        if len(residues) != self.level:
            raise ValueError(f"level {self.level} needs {self.level} residues, got {len(residues)}")
        total = t_bar.ctx.zero
        for exps, c in self.terms:
            value = c.evaluate(t_bar)
            for r, e in zip(residues, exps):
                if e:
                    value = value * r**e
            total = total + value
        return total

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.terms:
            mono = "*".join(f"a_{k + 1}" if e == 1 else f"a_{k + 1}^{e}" for k, e in enumerate(exps) if e)
            if not mono:
                parts.append(repr(c))
            elif c == BasePoly.one(self.q):
                parts.append(mono)
            else:
                parts.append(f"({c!r})*{mono}")
        return " + ".join(parts)


@dataclass(frozen=True)
class StepPolynomial:
    """Polynomial in X over R_level with dense ascending coefficients; a_{level+1} is its root."""

    level: int
    coeffs: tuple[TowerElement, ...]

    @classmethod
    def artin_schreier(cls, q: int, level: int) -> StepPolynomial:
        """X^q - X + t a_level."""
        one = TowerElement.constant(BasePoly.one(q), level)
        coeffs = [TowerElement(q, level)] * (q + 1)
        coeffs[0] = TowerElement.constant(BasePoly.t(q), level) * TowerElement.generator(q, level, level)
        coeffs[1] = -one
        coeffs[q] = one
        return cls(level, tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def artin_schreier_constant(self) -> TowerElement:
        """c such that this polynomial is X^q - X + c."""
        q = self.coeffs[0].q
        one = TowerElement.constant(BasePoly.one(q), self.level)
        middle = self.coeffs[2:q]
        if self.degree != q or self.coeffs[q] != one or self.coeffs[1] != -one or any(not c.is_zero() for c in middle):
            raise ValueError(f"{self} is not of the form X^q - X + c")
        return self.coeffs[0]

    def evaluate(self, x: FFElem, t_bar: FFElem, residues: Sequence[FFElem]) -> FFElem:
        result = x.ctx.zero
        for c in reversed(self.coeffs):
            result = result * x + c.evaluate(t_bar, residues)
        return result

    def __str__(self) -> str:
        return f"X^{self.degree} - X + {self.coeffs[0]!r}"


@dataclass(frozen=True)
class TowerLevel:
    """F(a_j) over F = F_q(t), certified by a residue chain at one prime.

    residue_chain holds residues of a_1 .. a_{j-1} and residue_t the residue of t,
    all in one finite field.
    """

    j: int
    min_poly_chain: tuple[StepPolynomial, ...]
    degree_over_F: int
    certified: bool
    certificate_prime: Optional[BasePoly] = None
    residue_chain: tuple[FFElem, ...] = field(default=())
    residue_t: Optional[FFElem] = None

    def chain_vanishes(self) -> bool:
        """Every step polynomial but the last vanishes at the next residue."""
        if self.residue_t is None:
            return not self.residue_chain
        return all(
            step.evaluate(self.residue_chain[i], self.residue_t, self.residue_chain[:i]).is_zero()
            for i, step in enumerate(self.min_poly_chain[:-1])
        )


def _certify_from(
    steps: Sequence[StepPolynomial], chain: list[FFElem], t_bar: FFElem, max_degree: int
) -> Optional[tuple[list[FFElem], FFElem]]:
    """Extend chain by roots of successive step polynomials until the last one has no root.

    chain and t_bar share one field; a larger field receives all of them along
    the same embedding, so every relation keeps holding in the last field.
    """
    c = steps[len(chain)].artin_schreier_constant().evaluate(t_bar, chain)
    if len(chain) == len(steps) - 1:
        if solve_additive(t_bar.ctx, 1, t_bar.ctx.one, -c) is None:
            return chain, t_bar
        return None
    try:
        roots = solve_artin_schreier(1, c, degree_cap=max_degree)
    except FieldDegreeCapExceeded:
        return None
    target = roots[0].ctx
    moved = [embed(x, target) for x in chain]
    t_next = embed(t_bar, target)
    for root in roots:
        found = _certify_from(steps, moved + [root], t_next, max_degree)
        if found is not None:
            return found
    return None


def artin_schreier_tower(
    q: int, j_max: int, max_prime_degree: int = 4, max_extension_degree: int = 64
) -> list[TowerLevel]:
    """Levels 0..j_max of F(a_j), each certified by a no-root residue chain.

    A certificate for level j is a prime p and residues x_i of a_i (i < j) in a
    finite extension of A/p, each a root of its step polynomial, such that
    X^q - X + t x_{j-1} has no root there. The rings R_i are etale over A, so
    such a chain forces the step polynomial to be irreducible over F(a_{j-1}).
    """
    if not galois.is_prime(q):
        raise TowerCertificationError(f"tower certification needs prime q, got {q}")
    steps = [StepPolynomial.artin_schreier(q, i) for i in range(j_max)]
    levels = [TowerLevel(j=0, min_poly_chain=(), degree_over_F=1, certified=True)]
    for j in range(1, j_max + 1):
        certificate: Optional[tuple[BasePoly, list[FFElem], FFElem]] = None
        for d in range(1, max_prime_degree + 1):
            for p in irreducible_monics(q, d):
                ctx = field_create(q, d, modulus=p.coeffs)
                found = _certify_from(steps[:j], [], BasePoly.t(q).residue(ctx), max_extension_degree)
                if found is not None:
                    certificate = (p, *found)
                    break
            if certificate is not None:
                break
        if certificate is None:
            logger.error("Tower level not certified", q=q, level=j)
            raise TowerCertificationError(f"no no-root certificate for level {j} with primes of degree <= {max_prime_degree}")
        prime, chain, t_bar = certificate
        level = TowerLevel(
            j=j,
            min_poly_chain=tuple(steps[:j]),
            degree_over_F=levels[-1].degree_over_F * q,
            certified=True,
            certificate_prime=prime,
            residue_chain=tuple(chain),
            residue_t=t_bar,
        )
        if not level.chain_vanishes():
            raise InvariantViolation(f"residue chain for level {j} is not a chain of roots")
        levels.append(level)
        logger.info("Tower level certified", q=q, level=j, prime=str(prime), residue_degree=t_bar.ctx.d)
    return levels
