"""The ring A = F_q[t], its closed points and the degree valuation at infinity."""

from __future__ import annotations

import functools
import math
import random
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterator, Sequence, Union

import galois
import numpy as np
import structlog

from ..common.errors import DivisionByZero
from .finite_field import base_field_tables

if TYPE_CHECKING:
    from .finite_field import FFElem, FieldCtx

logger = structlog.get_logger(__name__)

# Degree of the place at infinity of F_q(t).
D_INF = 1

INFINITY = math.inf


def _normalize(coeffs: Sequence[int]) -> tuple[int, ...]:
    items = list(coeffs)
    while items and items[-1] == 0:
        items.pop()
    return tuple(items)


@dataclass(frozen=True)
class BasePoly:
    """Polynomial in t over F_q with ascending coefficients (galois integer labels)."""

    q: int
    coeffs: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _normalize(self.coeffs))

    # constructors

    @classmethod
    def zero(cls, q: int) -> BasePoly:
        return cls(q, ())

    @classmethod
    def one(cls, q: int) -> BasePoly:
        return cls(q, (1,))

    @classmethod
    def t(cls, q: int) -> BasePoly:
        return cls(q, (0, 1))

    @classmethod
    def constant(cls, q: int, label: int) -> BasePoly:
        return cls(q, (label,))

    @classmethod
    def from_int(cls, q: int, n: int) -> BasePoly:
        """Polynomial whose coefficients are the base-q digits of n."""
        digits = []
        while n:
            n, r = divmod(n, q)
            digits.append(r)
        return cls(q, tuple(digits))

    @classmethod
    def random(cls, q: int, max_degree: int, rng: random.Random) -> BasePoly:
        return cls(q, tuple(rng.randrange(q) for _ in range(max_degree + 1)))

    @classmethod
    def _from_galois(cls, q: int, poly: galois.Poly) -> BasePoly:
        labels = poly.coefficients(order="asc").view(np.ndarray).tolist()
        return cls(q, tuple(int(c) for c in labels))

    def _to_galois(self) -> galois.Poly:
        return galois.Poly(list(self.coeffs) or [0], field=galois.GF(self.q), order="asc")

    # structure

    @property
    def degree(self) -> int:
        """Degree in t; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def coefficient(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def is_monic(self) -> bool:
        return self.leading() == 1

    def is_constant(self) -> bool:
        return self.degree <= 0

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        return (self.degree, tuple(reversed(self.coeffs)))

    def to_list(self) -> list[int]:
        return list(self.coeffs)

    # arithmetic

    def _check(self, other: object) -> BasePoly:
        if isinstance(other, int) and 0 <= other < self.q:
            return BasePoly.constant(self.q, other)
        if not isinstance(other, BasePoly) or other.q != self.q:
            raise TypeError(f"cannot combine F_{self.q}[t] with {other!r}")
        return other

    def __add__(self, other: object) -> BasePoly:
        o = self._check(other)
        add = base_field_tables(self.q).add
        n = max(len(self.coeffs), len(o.coeffs))
        return BasePoly(self.q, tuple(add[self.coefficient(i)][o.coefficient(i)] for i in range(n)))

    __radd__ = __add__

    def __neg__(self) -> BasePoly:
        neg = base_field_tables(self.q).neg
        return BasePoly(self.q, tuple(neg[c] for c in self.coeffs))

    def __sub__(self, other: object) -> BasePoly:
        return self + (-self._check(other))

    def __rsub__(self, other: object) -> BasePoly:
        return self._check(other) - self

    def __mul__(self, other: object) -> BasePoly:
        o = self._check(other)
        if not self.coeffs or not o.coeffs:
            return BasePoly.zero(self.q)
        tables = base_field_tables(self.q)
        add, mul = tables.add, tables.mul
        out = [0] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                row = mul[a]
                for j, b in enumerate(o.coeffs):
                    if b:
                        out[i + j] = add[out[i + j]][row[b]]
        return BasePoly(self.q, tuple(out))

    __rmul__ = __mul__

    def scale(self, label: int) -> BasePoly:
        row = base_field_tables(self.q).mul[label]
        return BasePoly(self.q, tuple(row[c] for c in self.coeffs))

    def __pow__(self, n: int) -> BasePoly:
        result = BasePoly.one(self.q)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other: object) -> tuple[BasePoly, BasePoly]:
        o = self._check(other)
        if o.is_zero():
            raise DivisionByZero("division by the zero polynomial")
        quotient, remainder = divmod(self._to_galois(), o._to_galois())
        return BasePoly._from_galois(self.q, quotient), BasePoly._from_galois(self.q, remainder)

    def __floordiv__(self, other: object) -> BasePoly:
        return divmod(self, other)[0]

    def __mod__(self, other: object) -> BasePoly:
        return divmod(self, other)[1]

    def divides(self, other: BasePoly) -> bool:
        return (other % self).is_zero()

    def monic(self) -> BasePoly:
        if self.is_zero():
            return self
        return self.scale(base_field_tables(self.q).inv[self.leading()])

    def gcd(self, other: BasePoly) -> BasePoly:
        """Monic gcd; gcd(0, 0) = 0."""
        a, b = self, self._check(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def inverse(self) -> BasePoly:
        """Inverse of a nonzero constant; other elements of A are not units."""
        if self.degree != 0:
            raise DivisionByZero(f"{self!r} is not a unit of F_{self.q}[t]")
        return BasePoly.constant(self.q, base_field_tables(self.q).inv[self.coeffs[0]])

    def frobenius(self, i: int = 1) -> BasePoly:
        """a^{q^i} = a(t^{q^i}); coefficients lie in F_q and are fixed."""
        if i == 0 or self.degree <= 0:
            return self
        if i < 0:
            raise ValueError("F_q[t] has no inverse q-power Frobenius")
        step = self.q**i
        out = [0] * (self.degree * step + 1)
        for k, c in enumerate(self.coeffs):
            out[k * step] = c
        return BasePoly(self.q, tuple(out))

    # factorization and residues

    def is_irreducible(self) -> bool:
        return self.degree >= 1 and bool(self._to_galois().is_irreducible())

    def factor(self) -> list[tuple[BasePoly, int]]:
        """Monic irreducible factors with multiplicities, in deterministic order."""
        if self.degree < 1:
            return []
        factors, multiplicities = self._to_galois().factors()
        pairs = [(BasePoly._from_galois(self.q, f), int(e)) for f, e in zip(factors, multiplicities)]
        return sorted(pairs, key=lambda pair: pair[0].sort_key())

    def residue(self, ctx: FieldCtx) -> FFElem:
        """Image in F_q[X]/(modulus) under t -> X, i.e. the reduction mod the modulus."""
        if ctx.q != self.q:
            raise TypeError(f"F_{self.q}[t] does not map to {ctx!r}")
        return ctx.element(self.coeffs)

    def evaluate(self, x: FFElem) -> FFElem:
        result = x.ctx.zero
        for c in reversed(self.coeffs):
            result = result * x + x.ctx.scalar(c)
        return result

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            if k == 0:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms)


@dataclass(frozen=True)
class RationalFunction:
    """A quotient num/den in F_q(t); not reduced to lowest terms."""

    num: BasePoly
    den: BasePoly

    def __post_init__(self) -> None:
        if self.den.is_zero():
            raise DivisionByZero("rational function with zero denominator")
        if self.num.q != self.den.q:
            raise TypeError("numerator and denominator over different fields")

    @property
    def q(self) -> int:
        return self.num.q

    @classmethod
    def from_poly(cls, f: BasePoly) -> RationalFunction:
        return cls(f, BasePoly.one(f.q))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other: RationalFunction) -> RationalFunction:
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    def __mul__(self, other: RationalFunction) -> RationalFunction:
        return RationalFunction(self.num * other.num, self.den * other.den)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return (self.num * other.den - other.num * self.den).is_zero()

    def __hash__(self) -> int:
        g = self.num.gcd(self.den)
        if g.is_zero():
            return hash((self.q, ()))
        num, den = self.num // g, self.den // g
        lead = den.leading()
        return hash((num.scale(base_field_tables(self.q).inv[lead]), den.monic()))


class PolynomialRing:
    """F_q[t] as a coefficient ring for skew polynomials with generic characteristic."""

    def __init__(self, q: int):
        base_field_tables(q)
        self.q = q
        self.zero = BasePoly.zero(q)
        self.one = BasePoly.one(q)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PolynomialRing) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("F_q[t]", self.q))

    def __repr__(self) -> str:
        return f"PolynomialRing(q={self.q})"


def poly_arith(op: str, f: BasePoly, g: BasePoly) -> Union[BasePoly, tuple[BasePoly, BasePoly]]:
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    if op == "divmod":
        return divmod(f, g)
    if op == "gcd":
        return f.gcd(g)
    raise ValueError(f"unknown polynomial operation {op!r}")


def ord_inf(f: Union[BasePoly, RationalFunction]) -> Union[int, float]:
    """The degree valuation -deg at infinity; zero maps to +infinity."""
    if isinstance(f, RationalFunction):
        if f.is_zero():
            return INFINITY
        return f.den.degree - f.num.degree
    if f.is_zero():
        return INFINITY
    return -f.degree


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError(f"mobius is defined on positive integers, got {n}")
    if n == 1:
        return 1
    _, multiplicities = galois.factors(n)
    if any(e > 1 for e in multiplicities):
        return 0
    return -1 if len(multiplicities) % 2 else 1


def necklace_count(q: int, d: int) -> int:
    """Number of monic irreducibles of degree d over F_q."""
    total = sum(mobius(e) * q ** (d // e) for e in galois.divisors(d))
    return total // d


@functools.lru_cache(maxsize=64)
def _irreducible_monics(q: int, d: int) -> tuple[BasePoly, ...]:
    polys = tuple(BasePoly._from_galois(q, f) for f in galois.irreducible_polys(q, d))
    logger.debug("Enumerated irreducibles", q=q, degree=d, count=len(polys))
    return polys


def irreducible_monics(q: int, d: int) -> list[BasePoly]:
    """All monic irreducibles of degree d over F_q in galois' lexicographic order."""
    if d < 1:
        raise ValueError(f"degree must be at least 1, got {d}")
    base_field_tables(q)
    return list(_irreducible_monics(q, d))


def polys_of_degree_at_most(q: int, d: int) -> Iterator[BasePoly]:
    """Every polynomial of degree <= d (zero included), in base-q counting order."""
    for n in range(q ** (d + 1)):
        yield BasePoly.from_int(q, n)
