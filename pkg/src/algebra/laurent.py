"""Truncated Laurent series in pi = 1/t over a finite field.

With coefficients in F_q these model F_inf = F_q((pi)); with coefficients in
F_{q^n} they model its unramified extension W used by the division algebra.
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence, Union

from ..common.errors import ContextMismatch, InverseOfZero, PrecisionExhausted
from .base_ring import INFINITY, BasePoly, RationalFunction
from .finite_field import FFElem, FieldCtx, field_create


class LaurentSeries:
    """sum coeffs[i] * pi^(lead + i) + O(pi^(lead + len(coeffs))).

    A nonzero series has coeffs[0] != 0. A series that is zero to precision N
    is stored with lead = N and no coefficients.
    """

    __slots__ = ("ctx", "lead", "coeffs")

    def __init__(self, ctx: FieldCtx, lead: int, coeffs: Iterable[FFElem]):
        items = list(coeffs)
        skip = 0
        while skip < len(items) and not items[skip]:
            skip += 1
        self.ctx = ctx
        self.lead = lead + skip
        self.coeffs: tuple[FFElem, ...] = tuple(items[skip:])

    # constructors

    @classmethod
    def zero(cls, ctx: FieldCtx, absprec: int) -> LaurentSeries:
        return cls(ctx, absprec, ())

    @classmethod
    def one(cls, ctx: FieldCtx, prec: int) -> LaurentSeries:
        return cls.monomial(ctx.one, 0, prec)

    @classmethod
    def monomial(cls, c: FFElem, exponent: int, prec: int) -> LaurentSeries:
        """c * pi^exponent with prec known coefficients."""
        if not c:
            return cls.zero(c.ctx, exponent + prec)
        return cls(c.ctx, exponent, [c] + [c.ctx.zero] * (prec - 1))

    @classmethod
    def uniformizer(cls, ctx: FieldCtx, prec: int) -> LaurentSeries:
        return cls.monomial(ctx.one, 1, prec)

    @classmethod
    def from_labels(cls, ctx: FieldCtx, lead: int, labels: Sequence[int]) -> LaurentSeries:
        return cls(ctx, lead, [ctx.scalar(c) for c in labels])

    # structure

    @property
    def precision(self) -> int:
        """Number of stored coefficients (relative precision)."""
        return len(self.coeffs)

    @property
    def absprec(self) -> int:
        return self.lead + len(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def valuation(self) -> Union[int, float]:
        return INFINITY if self.is_zero() else self.lead

    def coefficient(self, k: int) -> FFElem:
        if k >= self.absprec:
            raise PrecisionExhausted(f"coefficient of pi^{k} is beyond O(pi^{self.absprec})")
        if k < self.lead:
            return self.ctx.zero
        return self.coeffs[k - self.lead]

    def coefficients(self, start: int, stop: int) -> list[FFElem]:
        return [self.coefficient(k) for k in range(start, stop)]

    def truncate(self, absprec: int) -> LaurentSeries:
        """Drop everything from pi^absprec on; fails if those terms are not known."""
        if absprec > self.absprec:
            raise PrecisionExhausted(f"requested O(pi^{absprec}) from a series known to O(pi^{self.absprec})")
        if absprec <= self.lead:
            return LaurentSeries.zero(self.ctx, absprec)
        return LaurentSeries(self.ctx, self.lead, self.coeffs[: absprec - self.lead])

    def _check(self, other: LaurentSeries) -> None:
        if other.ctx is not self.ctx and other.ctx != self.ctx:
            raise ContextMismatch(f"{self.ctx!r} vs {other.ctx!r}")

    # arithmetic

    def __add__(self, other: LaurentSeries) -> LaurentSeries:
        self._check(other)
        absprec = min(self.absprec, other.absprec)
        start = min(self.lead, other.lead, absprec)
        return LaurentSeries(
            self.ctx,
            start,
            [self.coefficient(k) + other.coefficient(k) for k in range(start, absprec)],
        )

    def __neg__(self) -> LaurentSeries:
        return LaurentSeries(self.ctx, self.lead, [-c for c in self.coeffs])

    def __sub__(self, other: LaurentSeries) -> LaurentSeries:
        return self + (-other)

    def __mul__(self, other: LaurentSeries) -> LaurentSeries:
        self._check(other)
        absprec = min(self.lead + other.absprec, other.lead + self.absprec)
        start = self.lead + other.lead
        if self.is_zero() or other.is_zero() or absprec <= start:
            return LaurentSeries.zero(self.ctx, absprec)
        zero = self.ctx.zero
        out = [zero] * (absprec - start)
        for i, a in enumerate(self.coeffs):
            if not a or i >= len(out):
                continue
            for j, b in enumerate(other.coeffs[: len(out) - i]):
                if b:
                    out[i + j] = out[i + j] + a * b
        return LaurentSeries(self.ctx, start, out)

    def scale(self, c: FFElem) -> LaurentSeries:
        return LaurentSeries(self.ctx, self.lead, [c * a for a in self.coeffs])

    def shift(self, k: int) -> LaurentSeries:
        """Multiply by pi^k."""
        return LaurentSeries(self.ctx, self.lead + k, self.coeffs)

    def inverse(self) -> LaurentSeries:
        if self.is_zero():
            raise InverseOfZero(f"series is zero to O(pi^{self.absprec})")
        x = self.coeffs
        inv0 = x[0].inverse()
        y = [inv0]
        for k in range(1, len(x)):
            acc = self.ctx.zero
            for i in range(1, k + 1):
                if x[i]:
                    acc = acc + x[i] * y[k - i]
            y.append(-(inv0 * acc))
        return LaurentSeries(self.ctx, -self.lead, y)

    def __truediv__(self, other: LaurentSeries) -> LaurentSeries:
        return self * other.inverse()

    def __pow__(self, n: int) -> LaurentSeries:
        if n < 0:
            return self.inverse() ** (-n)
        result = LaurentSeries.one(self.ctx, self.precision or 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def map_coefficients(self, fn: Callable[[FFElem], FFElem], ctx: FieldCtx | None = None) -> LaurentSeries:
        return LaurentSeries(ctx or self.ctx, self.lead, [fn(c) for c in self.coeffs])

    def frobenius(self, i: int = 1) -> LaurentSeries:
        """Coefficientwise q^i-power Frobenius (the generator of Gal(W/F_inf) when i = 1)."""
        return self.map_coefficients(lambda c: c.frobenius(i))

    def equals_to_precision(self, other: LaurentSeries) -> bool:
        return (self - other).is_zero()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self.ctx == other.ctx and self.lead == other.lead and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.ctx, self.lead, self.coeffs))

    def __repr__(self) -> str:
        terms = [f"({c!r})*pi^{self.lead + i}" for i, c in enumerate(self.coeffs) if c]
        body = " + ".join(terms) if terms else "0"
        return f"{body} + O(pi^{self.absprec})"


def laurent_arith(op: str, x: LaurentSeries, y: LaurentSeries | None = None) -> LaurentSeries:
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "inv":
        return x.inverse()
    raise ValueError(f"unknown series operation {op!r}")


def _poly_series(f: BasePoly, ctx: FieldCtx, prec: int) -> LaurentSeries:
    if f.is_zero():
        return LaurentSeries.zero(ctx, prec)
    top = list(reversed(f.coeffs))
    labels = (top + [0] * prec)[:prec]
    return LaurentSeries.from_labels(ctx, -f.degree, labels)


def expand_at_infinity(
    f: Union[BasePoly, RationalFunction], prec: int, ctx: FieldCtx | None = None
) -> LaurentSeries:
    """pi-adic expansion of f (pi = 1/t) with prec known coefficients from its valuation on."""
    if ctx is None:
        ctx = field_create(f.q, 1)
    if isinstance(f, BasePoly):
        return _poly_series(f, ctx, prec)
    if f.is_zero():
        return LaurentSeries.zero(ctx, prec)
    return _poly_series(f.num, ctx, prec) * _poly_series(f.den, ctx, prec).inverse()


def normalized_residue(series: LaurentSeries, j: int) -> tuple[int, ...]:
    """F_q labels of the first j coefficients (pi^0 .. pi^(j-1)) of an element of O_inf."""
    return tuple(c.base_label() for c in series.coefficients(0, j))
