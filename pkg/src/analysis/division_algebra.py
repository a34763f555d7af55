"""Truncated model of the central division algebra D of invariant -1/n over F_inf.

D = W + W beta + ... + W beta^(n-1), where W is the unramified extension of F_inf
of degree n, beta^n = pi and beta a beta^-1 = sigma(a) for the coefficientwise
q-power Frobenius sigma. Components are Laurent series in pi over F_{q^n}.
Valuations are normalized by v(beta) = 1, so v(pi) = n.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import structlog

from ..algebra import linalg
from ..algebra.finite_field import FieldCtx, absolute_trace, field_create
from ..algebra.laurent import LaurentSeries
from ..common.errors import (
    ContextMismatch,
    InverseOfZero,
    InvariantViolation,
    PrecisionExhausted,
    ZeroValuation,
)

logger = structlog.get_logger(__name__)


class DivAlgCtx:
    """D of degree n over F_q((pi)); prec is the default precision of new components."""

    def __init__(self, n: int, q: int, prec: int):
        if n < 1:
            raise ValueError(f"degree must be positive, got {n}")
        if prec < 1:
            raise ValueError(f"precision must be positive, got {prec}")
        self.n = n
        self.q = q
        self.prec = prec
        self.W: FieldCtx = field_create(q, n)
        self.F: FieldCtx = field_create(q, 1)
        logger.debug("Division algebra context created", n=n, q=q, prec=prec)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DivAlgCtx):
            return NotImplemented
        return (self.n, self.q, self.prec) == (other.n, other.q, other.prec)

    def __hash__(self) -> int:
        return hash((self.n, self.q, self.prec))

    def __repr__(self) -> str:
        return f"DivAlgCtx(n={self.n}, q={self.q}, prec={self.prec})"

    def zero_component(self) -> LaurentSeries:
        return LaurentSeries.zero(self.W, self.prec)

    def element(self, components: Sequence[Optional[LaurentSeries]]) -> DivAlgElem:
        """sum a_i beta^i; None stands for a zero component."""
        if len(components) != self.n:
            raise ValueError(f"expected {self.n} components, got {len(components)}")
        out = []
        for c in components:
            if c is None:
                out.append(self.zero_component())
            elif c.ctx != self.W:
                raise ContextMismatch(f"component over {c.ctx!r}, expected {self.W!r}")
            else:
                out.append(c)
        return DivAlgElem(self, tuple(out))

    def zero(self) -> DivAlgElem:
        return self.element([None] * self.n)

    def one(self) -> DivAlgElem:
        return self.from_w(LaurentSeries.one(self.W, self.prec))

    def beta(self, power: int = 1) -> DivAlgElem:
        """beta^power = pi^(power // n) beta^(power % n)."""
        components: list[Optional[LaurentSeries]] = [None] * self.n
        components[power % self.n] = LaurentSeries.monomial(self.W.one, power // self.n, self.prec)
        return self.element(components)

    def uniformizer(self) -> DivAlgElem:
        """pi = beta^n."""
        return self.beta(self.n)

    def from_w(self, a: LaurentSeries) -> DivAlgElem:
        return self.element([a] + [None] * (self.n - 1))

    def lift_base(self, s: LaurentSeries) -> LaurentSeries:
        """A series over F_q viewed inside W."""
        return s.map_coefficients(lambda c: self.W.scalar(c.base_label()), ctx=self.W)

    def from_base(self, s: LaurentSeries) -> DivAlgElem:
        """The scalar s of F_inf = F_q((pi)) in D."""
        return self.from_w(self.lift_base(s))

    def random_component(self, rng: random.Random, min_lead: int = 0, max_lead: int = 2) -> LaurentSeries:
        lead = rng.randint(min_lead, max_lead)
        return LaurentSeries(self.W, lead, [self.W.random_element(rng) for _ in range(self.prec)])

    def random_element(self, rng: random.Random, max_lead: int = 2) -> DivAlgElem:
        return self.element([self.random_component(rng, 0, max_lead) for _ in range(self.n)])

    def random_unit(self, rng: random.Random) -> DivAlgElem:
        """An element of O_D^x: unit a_0 and integral higher components."""
        a0 = self.random_component(rng, 0, 0)
        while a0.is_zero() or a0.lead != 0:
            a0 = self.random_component(rng, 0, 0)
        rest = [self.random_component(rng, 0, 2) for _ in range(self.n - 1)]
        return self.element([a0] + rest)


class DivAlgElem:
    """sum components[i] * beta^i."""

    __slots__ = ("ctx", "components")

    def __init__(self, ctx: DivAlgCtx, components: tuple[LaurentSeries, ...]):
        self.ctx = ctx
        self.components = components

    def _other(self, other: object) -> DivAlgElem:
        if not isinstance(other, DivAlgElem):
            raise TypeError(f"cannot combine DivAlgElem with {type(other).__name__}")
        if other.ctx != self.ctx:
            raise ContextMismatch(f"{self.ctx!r} vs {other.ctx!r}")
        return other

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __add__(self, other: object) -> DivAlgElem:
        y = self._other(other)
        return DivAlgElem(self.ctx, tuple(a + b for a, b in zip(self.components, y.components)))

    def __neg__(self) -> DivAlgElem:
        return DivAlgElem(self.ctx, tuple(-a for a in self.components))

    def __sub__(self, other: object) -> DivAlgElem:
        return self + (-self._other(other))

    def __mul__(self, other: object) -> DivAlgElem:
        y = self._other(other)
        n = self.ctx.n
        slots: list[Optional[LaurentSeries]] = [None] * n
        for i, a in enumerate(self.components):
            for k, b in enumerate(y.components):
                # beta^i b = sigma^i(b) beta^i, and beta^n = pi
                term = a * b.frobenius(i)
                r = i + k
                if r >= n:
                    term, r = term.shift(1), r - n
                current = slots[r]
                slots[r] = term if current is None else current + term
        return self.ctx.element(slots)

    def inverse(self) -> DivAlgElem:
        if self.is_zero():
            raise InverseOfZero("element is zero to the working precision")
        n = self.ctx.n
        unit_row = [LaurentSeries.one(self.ctx.W, self.ctx.prec)] + [self.ctx.zero_component()] * (n - 1)
        return self.ctx.element(_solve_left(right_regular_matrix(self), unit_row))

    def __truediv__(self, other: object) -> DivAlgElem:
        return self * self._other(other).inverse()

    def __pow__(self, k: int) -> DivAlgElem:
        if k < 0:
            return self.inverse() ** (-k)
        result = self.ctx.one()
        for _ in range(k):
            result = result * self
        return result

    def valuation(self) -> int:
        return da_valuation(self)

    def reduced_trace(self) -> LaurentSeries:
        return da_reduced_trace(self)

    def reduced_norm(self) -> LaurentSeries:
        return da_reduced_norm(self)

    def equals_to_precision(self, other: DivAlgElem) -> bool:
        return (self - other).is_zero()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DivAlgElem):
            return NotImplemented
        return self.ctx == other.ctx and self.components == other.components

    def __hash__(self) -> int:
        return hash((self.ctx, self.components))

    def __repr__(self) -> str:
        terms = [f"({c!r})*beta^{i}" for i, c in enumerate(self.components) if not c.is_zero()]
        return " + ".join(terms) if terms else "0"


def right_regular_matrix(alpha: DivAlgElem) -> list[list[LaurentSeries]]:
    """Row l holds the W-coordinates of beta^l * alpha in the basis 1, beta, ..., beta^(n-1)."""
    n = alpha.ctx.n
    matrix: list[list[LaurentSeries]] = [[alpha.ctx.zero_component()] * n for _ in range(n)]
    for row in range(n):
        for i, a in enumerate(alpha.components):
            entry = a.frobenius(row)
            col = row + i
            if col >= n:
                entry, col = entry.shift(1), col - n
            matrix[row][col] = entry
    return matrix


def _solve_left(matrix: list[list[LaurentSeries]], target: list[LaurentSeries]) -> list[LaurentSeries]:
    """y with y * matrix = target, by Gauss-Jordan with pivots of least valuation."""
    n = len(matrix)
    # transpose so that the unknowns run along the rows
    rows = [[matrix[l][c] for l in range(n)] + [target[c]] for c in range(n)]
    for col in range(n):
        candidates = [r for r in range(col, n) if not rows[r][col].is_zero()]
        if not candidates:
            raise PrecisionExhausted("right-regular matrix is singular to the working precision")
        pivot = min(candidates, key=lambda r: rows[r][col].lead)
        rows[col], rows[pivot] = rows[pivot], rows[col]
        inv = rows[col][col].inverse()
        rows[col] = [entry * inv for entry in rows[col]]
        for r in range(n):
            if r == col or rows[r][col].is_zero():
                continue
            factor = rows[r][col]
            rows[r] = [entry - factor * p for entry, p in zip(rows[r], rows[col])]
    return [rows[c][n] for c in range(n)]


def _descend(series: LaurentSeries, target: FieldCtx, what: str) -> LaurentSeries:
    """A series over W whose coefficients lie in F_q, rewritten over F_q."""
    try:
        return series.map_coefficients(lambda c: target.scalar(c.base_label()), ctx=target)
    except ValueError as e:
        raise InvariantViolation(f"{what} does not lie in F_inf: {series!r}") from e


def da_arith(op: str, x: DivAlgElem, y: Optional[DivAlgElem] = None) -> DivAlgElem:
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "inv":
        return x.inverse()
    raise ValueError(f"unknown division algebra operation {op!r}")


def da_valuation(alpha: DivAlgElem) -> int:
    """min_i (n ord_pi(a_i) + i)."""
    n = alpha.ctx.n
    values = [n * c.lead + i for i, c in enumerate(alpha.components) if not c.is_zero()]
    if not values:
        raise ZeroValuation("valuation of an element that is zero to precision")
    return min(values)


def da_reduced_trace(alpha: DivAlgElem) -> LaurentSeries:
    """Tr_{W/F_inf}(a_0), computed coefficientwise."""
    a0 = alpha.components[0]
    return a0.map_coefficients(lambda c: alpha.ctx.F.scalar(absolute_trace(c)), ctx=alpha.ctx.F)


def da_reduced_norm(alpha: DivAlgElem) -> LaurentSeries:
    """Determinant of the right-regular representation over W."""
    if alpha.is_zero():
        return LaurentSeries.zero(alpha.ctx.F, alpha.ctx.prec)
    det = linalg.leibniz_determinant(right_regular_matrix(alpha))
    return _descend(det, alpha.ctx.F, "reduced norm")


@dataclass(frozen=True)
class _SeriesPoly:
    """Polynomial in T with Laurent series coefficients; None is an exact zero."""

    coeffs: tuple[Optional[LaurentSeries], ...]

    def __add__(self, other: _SeriesPoly) -> _SeriesPoly:
        size = max(len(self.coeffs), len(other.coeffs))
        out: list[Optional[LaurentSeries]] = []
        for k in range(size):
            a = self.coeffs[k] if k < len(self.coeffs) else None
            b = other.coeffs[k] if k < len(other.coeffs) else None
            out.append(b if a is None else (a if b is None else a + b))
        return _SeriesPoly(tuple(out))

    def __neg__(self) -> _SeriesPoly:
        return _SeriesPoly(tuple(None if c is None else -c for c in self.coeffs))

    def __mul__(self, other: _SeriesPoly) -> _SeriesPoly:
        out: list[Optional[LaurentSeries]] = [None] * max(len(self.coeffs) + len(other.coeffs) - 1, 0)
        for i, a in enumerate(self.coeffs):
            if a is None:
                continue
            for k, b in enumerate(other.coeffs):
                if b is None:
                    continue
                term = a * b
                out[i + k] = term if out[i + k] is None else out[i + k] + term
        return _SeriesPoly(tuple(out))


def da_reduced_charpoly(alpha: DivAlgElem) -> list[LaurentSeries]:
    """Coefficients c_0..c_(n-1) of det(T - alpha) = T^n + ... + c_0 over F_inf."""
    ctx = alpha.ctx
    n = ctx.n
    matrix = right_regular_matrix(alpha)
    one = LaurentSeries.one(ctx.W, ctx.prec)
    entries = [
        [
            _SeriesPoly((-matrix[r][c], one)) if r == c else _SeriesPoly((-matrix[r][c],))
            for c in range(n)
        ]
        for r in range(n)
    ]
    det: _SeriesPoly = linalg.leibniz_determinant(entries)
    out = []
    for k in range(n):
        c = det.coeffs[k] if k < len(det.coeffs) else None
        out.append(LaurentSeries.zero(ctx.F, ctx.prec) if c is None else _descend(c, ctx.F, "reduced charpoly"))
    return out


def series_norm_from_conjugates(a: LaurentSeries, n: int) -> LaurentSeries:
    """Norm_{W/F_inf}(a) as the product of the n Frobenius conjugates, still over W."""
    result: Union[LaurentSeries, None] = None
    for i in range(n):
        conj = a.frobenius(i)
        result = conj if result is None else result * conj
    assert result is not None
    return result
