"""Twisted polynomials L[tau] with tau*a = a^q*tau, and truncated series in tau^-1."""

from __future__ import annotations

from typing import Any, Callable, Iterable, Optional, Protocol, Sequence, Union

import structlog

from ..common.errors import (
    ContextMismatch,
    DivisionByZero,
    InverseOfZero,
    PrecisionExhausted,
)
from .base_ring import INFINITY
from .finite_field import FFElem, FieldCtx, embed

logger = structlog.get_logger(__name__)


class CoefficientRing(Protocol):
    """What SkewPoly needs from its coefficients' home: a FieldCtx or F_q[t]."""

    q: int
    zero: Any
    one: Any


class SkewPoly:
    """sum coeffs[i] * tau^i; no trailing zero coefficients."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: CoefficientRing, coeffs: Iterable[Any]):
        items = list(coeffs)
        while items and not items[-1]:
            items.pop()
        self.ring = ring
        self.coeffs: tuple[Any, ...] = tuple(items)

    @classmethod
    def zero(cls, ring: CoefficientRing) -> SkewPoly:
        return cls(ring, [])

    @classmethod
    def one(cls, ring: CoefficientRing) -> SkewPoly:
        return cls(ring, [ring.one])

    @classmethod
    def constant(cls, ring: CoefficientRing, c: Any) -> SkewPoly:
        return cls(ring, [c])

    @classmethod
    def tau(cls, ring: CoefficientRing, power: int = 1) -> SkewPoly:
        return cls(ring, [ring.zero] * power + [ring.one])

    @property
    def degree(self) -> int:
        """tau-degree; -1 for zero."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def coefficient(self, i: int) -> Any:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.ring.zero

    def leading(self) -> Any:
        return self.coeffs[-1] if self.coeffs else self.ring.zero

    def constant_term(self) -> Any:
        """The map d: L[tau] -> L reading the tau^0 coefficient."""
        return self.coefficient(0)

    def _check(self, other: SkewPoly) -> None:
        if not isinstance(other, SkewPoly):
            raise ContextMismatch(f"cannot combine SkewPoly with {type(other).__name__}")
        if other.ring is not self.ring and other.ring != self.ring:
            raise ContextMismatch(f"{self.ring!r} vs {other.ring!r}")

    def __add__(self, other: SkewPoly) -> SkewPoly:
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return SkewPoly(self.ring, [self.coefficient(i) + other.coefficient(i) for i in range(n)])

    def __neg__(self) -> SkewPoly:
        return SkewPoly(self.ring, [-c for c in self.coeffs])

    def __sub__(self, other: SkewPoly) -> SkewPoly:
        return self + (-other)

    def __mul__(self, other: SkewPoly) -> SkewPoly:
        return skew_mul(self, other)

    def __pow__(self, n: int) -> SkewPoly:
        result = SkewPoly.one(self.ring)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale_left(self, c: Any) -> SkewPoly:
        """c * self."""
        return SkewPoly(self.ring, [c * a for a in self.coeffs])

    def shift(self, k: int) -> SkewPoly:
        """self * tau^k."""
        if not self.coeffs:
            return self
        return SkewPoly(self.ring, [self.ring.zero] * k + list(self.coeffs))

    def map_coefficients(self, fn: Callable[[Any], Any], ring: Optional[CoefficientRing] = None) -> SkewPoly:
        return SkewPoly(ring or self.ring, [fn(c) for c in self.coeffs])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SkewPoly):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.ring, self.coeffs))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("tau" if i == 1 else f"tau^{i}")
            terms.append(f"({c!r})" + (f"*{mono}" if mono else ""))
        return " + ".join(terms)


def skew_mul(f: SkewPoly, g: SkewPoly) -> SkewPoly:
    """(sum a_i tau^i)(sum b_j tau^j) = sum a_i b_j^(q^i) tau^(i+j)."""
    f._check(g)
    if not f.coeffs or not g.coeffs:
        return SkewPoly.zero(f.ring)
    out = [f.ring.zero] * (len(f.coeffs) + len(g.coeffs) - 1)
    for i, a in enumerate(f.coeffs):
        if not a:
            continue
        for j, b in enumerate(g.coeffs):
            if b:
                out[i + j] = out[i + j] + a * b.frobenius(i)
    return SkewPoly(f.ring, out)


def skew_right_divmod(f: SkewPoly, g: SkewPoly) -> tuple[SkewPoly, SkewPoly]:
    """(quotient, remainder) with f = quotient*g + remainder and deg remainder < deg g."""
    f._check(g)
    if g.is_zero():
        raise DivisionByZero("right division by the zero skew polynomial")
    ring = f.ring
    k = g.degree
    lead = g.leading()
    remainder = f
    quotient_terms: dict[int, Any] = {}
    while remainder.degree >= k:
        shift = remainder.degree - k
        c = remainder.leading() * lead.frobenius(shift).inverse()
        quotient_terms[shift] = c
        term = SkewPoly(ring, [ring.zero] * shift + [c])
        remainder = remainder - term * g
    size = max(quotient_terms) + 1 if quotient_terms else 0
    quotient = SkewPoly(ring, [quotient_terms.get(i, ring.zero) for i in range(size)])
    return quotient, remainder


def skew_apply(f: SkewPoly, x: FFElem) -> FFElem:
    """Evaluate f as the additive polynomial sum a_i X^(q^i) at x."""
    if not isinstance(f.ring, FieldCtx):
        raise TypeError("only skew polynomials over a finite field can be evaluated")
    result = x.ctx.zero
    power = x
    for i, a in enumerate(f.coeffs):
        if i:
            power = power.frobenius(1)
        if a:
            result = result + embed(a, x.ctx) * power
    return result


class SkewLaurentTrunc:
    """sum coeffs[i] * tau^(lead - i) + O(tau^(lead - len(coeffs))) over a finite field.

    Zero to precision is stored with no coefficients; lead is then the first
    unknown exponent.
    """

    __slots__ = ("ctx", "lead", "coeffs")

    def __init__(self, ctx: FieldCtx, lead: int, coeffs: Iterable[FFElem]):
        items = list(coeffs)
        skip = 0
        while skip < len(items) and not items[skip]:
            skip += 1
        self.ctx = ctx
        self.lead = lead - skip
        self.coeffs: tuple[FFElem, ...] = tuple(items[skip:])

    @classmethod
    def from_poly(cls, f: SkewPoly, prec: int) -> SkewLaurentTrunc:
        """A skew polynomial with prec known coefficients from its leading term down."""
        if not isinstance(f.ring, FieldCtx):
            raise TypeError("tau^-1 series need a finite coefficient field")
        if f.is_zero():
            return cls(f.ring, -prec, [])
        top = list(reversed(f.coeffs)) + [f.ring.zero] * prec
        return cls(f.ring, f.degree, top[:prec])

    @classmethod
    def tau(cls, ctx: FieldCtx, power: int, prec: int) -> SkewLaurentTrunc:
        return cls(ctx, power, [ctx.one] + [ctx.zero] * (prec - 1))

    @classmethod
    def constant(cls, c: FFElem, prec: int) -> SkewLaurentTrunc:
        return cls(c.ctx, 0, [c] + [c.ctx.zero] * (prec - 1))

    @property
    def precision(self) -> int:
        return len(self.coeffs)

    @property
    def floor(self) -> int:
        """Highest exponent whose coefficient is unknown."""
        return self.lead - len(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, exponent: int) -> FFElem:
        if exponent <= self.floor:
            raise PrecisionExhausted(f"coefficient of tau^{exponent} is beyond O(tau^{self.floor})")
        if exponent > self.lead:
            return self.ctx.zero
        return self.coeffs[self.lead - exponent]

    def _check(self, other: SkewLaurentTrunc) -> None:
        if other.ctx is not self.ctx and other.ctx != self.ctx:
            raise ContextMismatch(f"{self.ctx!r} vs {other.ctx!r}")

    def __add__(self, other: SkewLaurentTrunc) -> SkewLaurentTrunc:
        self._check(other)
        floor = max(self.floor, other.floor)
        top = max(self.lead, other.lead, floor)
        return SkewLaurentTrunc(
            self.ctx,
            top,
            [self.coefficient(e) + other.coefficient(e) for e in range(top, floor, -1)],
        )

    def __neg__(self) -> SkewLaurentTrunc:
        return SkewLaurentTrunc(self.ctx, self.lead, [-c for c in self.coeffs])

    def __sub__(self, other: SkewLaurentTrunc) -> SkewLaurentTrunc:
        return self + (-other)

    def __mul__(self, other: SkewLaurentTrunc) -> SkewLaurentTrunc:
        return skew_laurent_mul(self, other)

    def inverse(self) -> SkewLaurentTrunc:
        """Two-sided inverse; uses tau^-1 * a = a^(1/q) * tau^-1."""
        if self.is_zero():
            raise InverseOfZero(f"series is zero to O(tau^{self.floor})")
        L = self.lead
        x = self.coeffs
        inv0 = x[0].inverse()
        y = [inv0.frobenius(-L)]
        for s in range(1, len(x)):
            acc = self.ctx.zero
            for i in range(1, s + 1):
                if x[i]:
                    acc = acc + x[i] * y[s - i].frobenius(L - i)
            y.append((-(inv0 * acc)).frobenius(-L))
        return SkewLaurentTrunc(self.ctx, -L, y)

    def truncate(self, prec: int) -> SkewLaurentTrunc:
        """Keep prec coefficients from the leading term down."""
        if prec > len(self.coeffs):
            raise PrecisionExhausted(f"only {len(self.coeffs)} coefficients are known")
        return SkewLaurentTrunc(self.ctx, self.lead, self.coeffs[:prec])

    def map_coefficients(self, fn: Callable[[FFElem], FFElem], ctx: Optional[FieldCtx] = None) -> SkewLaurentTrunc:
        return SkewLaurentTrunc(ctx or self.ctx, self.lead, [fn(c) for c in self.coeffs])

    def embed_into(self, target: FieldCtx) -> SkewLaurentTrunc:
        return self.map_coefficients(lambda c: embed(c, target), target)

    def equals_to_precision(self, other: SkewLaurentTrunc) -> bool:
        return (self - other).is_zero()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SkewLaurentTrunc):
            return NotImplemented
        return self.ctx == other.ctx and self.lead == other.lead and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.ctx, self.lead, self.coeffs))

    def __repr__(self) -> str:
        terms = [f"({c!r})*tau^{self.lead - i}" for i, c in enumerate(self.coeffs) if c]
        return (" + ".join(terms) if terms else "0") + f" + O(tau^{self.floor})"


def skew_laurent_mul(x: SkewLaurentTrunc, y: SkewLaurentTrunc) -> SkewLaurentTrunc:
    """Product in L((tau^-1)); relative precision is the smaller of the two."""
    x._check(y)
    floor = max(x.floor + y.lead, x.lead + y.floor)
    top = x.lead + y.lead
    if x.is_zero() or y.is_zero() or top <= floor:
        return SkewLaurentTrunc(x.ctx, floor, [])
    size = top - floor
    out = [x.ctx.zero] * size
    for i, a in enumerate(x.coeffs[:size]):
        if not a:
            continue
        shift = x.lead - i
        for k, b in enumerate(y.coeffs[: size - i]):
            if b:
                out[i + k] = out[i + k] + a * b.frobenius(shift)
    return SkewLaurentTrunc(x.ctx, top, out)


def ord_tau_inv(x: SkewLaurentTrunc) -> Union[int, float]:
    """Valuation in tau^-1: minus the leading exponent."""
    if x.is_zero():
        return INFINITY
    return -x.lead


def commutes(
    f: Union[SkewPoly, SkewLaurentTrunc, FFElem],
    g: Union[SkewPoly, SkewLaurentTrunc, FFElem],
    prec: Optional[int] = None,
) -> bool:
    """fg = gf exactly for polynomials, to precision for tau^-1 series."""
    if isinstance(f, SkewLaurentTrunc) or isinstance(g, SkewLaurentTrunc):
        size = prec or _common_precision(f, g)
        fs, gs = _as_series(f, size), _as_series(g, size)
        return (fs * gs - gs * fs).is_zero()
    fp, gp = _as_poly(f), _as_poly(g)
    return fp * gp == gp * fp


def _common_precision(*values: object) -> int:
    return min(v.precision for v in values if isinstance(v, SkewLaurentTrunc))


def _as_series(x: Union[SkewPoly, SkewLaurentTrunc, FFElem], prec: int) -> SkewLaurentTrunc:
    if isinstance(x, SkewLaurentTrunc):
        return x
    if isinstance(x, FFElem):
        return SkewLaurentTrunc.constant(x, prec)
    return SkewLaurentTrunc.from_poly(x, prec)


def _as_poly(x: Union[SkewPoly, FFElem]) -> SkewPoly:
    if isinstance(x, FFElem):
        return SkewPoly.constant(x.ctx, x)
    return x


def as_series_list(values: Sequence[SkewPoly], prec: int) -> list[SkewLaurentTrunc]:
    return [SkewLaurentTrunc.from_poly(v, prec) for v in values]
