"""Univariate polynomials with coefficients in a finite field context."""

from __future__ import annotations

from typing import TYPE_CHECKING, Iterable, Sequence

from ..common.errors import ContextMismatch, DivisionByZero

if TYPE_CHECKING:
    from .finite_field import FFElem, FieldCtx


class FieldPoly:
    """Dense polynomial over a FieldCtx, ascending coefficients, no trailing zeros."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs: Iterable[FFElem]):
        items = list(coeffs)
        while items and not items[-1]:
            items.pop()
        self.ctx = ctx
        self.coeffs: tuple[FFElem, ...] = tuple(items)

    @classmethod
    def from_base_labels(cls, ctx: FieldCtx, labels: Sequence[int]) -> FieldPoly:
        """Polynomial whose coefficients are the F_q constants given by labels."""
        return cls(ctx, [ctx.scalar(c) for c in labels])

    @classmethod
    def x(cls, ctx: FieldCtx) -> FieldPoly:
        return cls(ctx, [ctx.zero, ctx.one])

    @classmethod
    def constant(cls, c: FFElem) -> FieldPoly:
        return cls(c.ctx, [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> FFElem:
        return self.coeffs[-1] if self.coeffs else self.ctx.zero

    def _check(self, other: FieldPoly) -> None:
        if other.ctx is not self.ctx and other.ctx != self.ctx:
            raise ContextMismatch(f"{self.ctx!r} vs {other.ctx!r}")

    def __add__(self, other: FieldPoly) -> FieldPoly:
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        zero = self.ctx.zero
        a = self.coeffs + (zero,) * (n - len(self.coeffs))
        b = other.coeffs + (zero,) * (n - len(other.coeffs))
        return FieldPoly(self.ctx, [x + y for x, y in zip(a, b)])

    def __neg__(self) -> FieldPoly:
        return FieldPoly(self.ctx, [-c for c in self.coeffs])

    def __sub__(self, other: FieldPoly) -> FieldPoly:
        return self + (-other)

    def __mul__(self, other: FieldPoly) -> FieldPoly:
        self._check(other)
        if not self.coeffs or not other.coeffs:
            return FieldPoly(self.ctx, [])
        out = [self.ctx.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return FieldPoly(self.ctx, out)

    def scale(self, c: FFElem) -> FieldPoly:
        return FieldPoly(self.ctx, [c * a for a in self.coeffs])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldPoly):
            return NotImplemented
        return self.ctx == other.ctx and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.ctx, self.coeffs))

    def __divmod__(self, other: FieldPoly) -> tuple[FieldPoly, FieldPoly]:
        self._check(other)
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        remainder = list(self.coeffs)
        dg = other.degree
        inv_lead = other.leading().inverse()
        quotient = [self.ctx.zero] * max(len(remainder) - dg, 0)
        for k in range(len(remainder) - 1, dg - 1, -1):
            c = remainder[k]
            if not c:
                continue
            factor = c * inv_lead
            quotient[k - dg] = factor
            for i, b in enumerate(other.coeffs):
                if b:
                    remainder[k - dg + i] = remainder[k - dg + i] - factor * b
        return FieldPoly(self.ctx, quotient), FieldPoly(self.ctx, remainder[:dg])

    def __mod__(self, other: FieldPoly) -> FieldPoly:
        return divmod(self, other)[1]

    def __floordiv__(self, other: FieldPoly) -> FieldPoly:
        return divmod(self, other)[0]

    def monic(self) -> FieldPoly:
        if self.is_zero():
            return self
        return self.scale(self.leading().inverse())

    def gcd(self, other: FieldPoly) -> FieldPoly:
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def __call__(self, x: FFElem) -> FFElem:
        result = x.ctx.zero
        for c in reversed(self.coeffs):
            result = result * x + c
        return result

    def frobenius_power_mod(self, modulus: FieldPoly, x_q_powers: Sequence[FieldPoly]) -> FieldPoly:
        """self^q mod modulus, given X^{jq} mod modulus for j < deg modulus."""
        result = FieldPoly(self.ctx, [])
        for j, c in enumerate(self.coeffs):
            if c:
                result = result + x_q_powers[j].scale(c.frobenius(1))
        return result

    def split_distinct_roots(self, deltas: Sequence[FFElem], trace_degree: int) -> list[FFElem]:
        """Roots of a squarefree polynomial that splits over the span of deltas.

        Splits by the value of Tr(delta * X) over the degree-trace_degree subfield
        that contains all roots and all deltas.
        """
        factors = [self.monic()]
        for delta in deltas:
            if all(f.degree <= 1 for f in factors):
                break
            refined: list[FieldPoly] = []
            for g in factors:
                if g.degree <= 1:
                    refined.append(g)
                    continue
                refined.extend(_split_by_trace(g, delta, trace_degree))
            factors = refined
        roots = []
        for f in factors:
            if f.degree == 1:
                roots.append(-f.coeffs[0])
            elif f.degree > 1:
                raise ValueError("polynomial does not split over the given subfield")
        return roots

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"({c!r})*X^{i}" if i else f"({c!r})")
        return " + ".join(terms)


def _x_q_powers(modulus: FieldPoly) -> list[FieldPoly]:
    ctx = modulus.ctx
    x = FieldPoly.x(ctx)
    x_q = FieldPoly(ctx, [ctx.one])
    for _ in range(ctx.q):
        x_q = (x_q * x) % modulus
    powers = [FieldPoly(ctx, [ctx.one]) % modulus]
    for _ in range(1, max(modulus.degree, 1)):
        powers.append((powers[-1] * x_q) % modulus)
    return powers


def _split_by_trace(g: FieldPoly, delta: FFElem, trace_degree: int) -> list[FieldPoly]:
    ctx = g.ctx
    powers = _x_q_powers(g)
    term = FieldPoly(ctx, [ctx.zero, delta]) % g
    trace = term
    for _ in range(1, trace_degree):
        term = term.frobenius_power_mod(g, powers)
        trace = trace + term
    pieces = []
    for label in range(ctx.q):
        shifted = trace - FieldPoly(ctx, [ctx.scalar(label)])
        piece = g.gcd(shifted)
        if piece.degree >= 1:
            pieces.append(piece)
    return pieces
