"""Finite fields F_{q^d} presented over F_q by an explicit monic irreducible modulus.

F_q itself comes from galois (its integer labels and tables); extensions are built
here so that towers can be presented over any prime power q, not only over the
prime field.
"""

from __future__ import annotations

import functools
import itertools
import math
import random
from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Sequence

import galois
import numpy as np
import structlog

from ..common.errors import (
    ContextMismatch,
    FieldDegreeCapExceeded,
    IncompatibleDegrees,
    NotADivisor,
    NotPrimePower,
    ReducibleModulus,
    ZeroInverse,
)
from . import linalg
from .field_poly import FieldPoly

logger = structlog.get_logger(__name__)

Coeffs = tuple[int, ...]

# Largest extension degree any automatic search may open.
DEFAULT_DEGREE_CAP = 192


@dataclass(frozen=True, eq=False)
class BaseFieldTables:
    """Arithmetic tables of F_q in galois' integer labels."""

    q: int
    p: int
    e: int
    add: tuple[tuple[int, ...], ...]
    mul: tuple[tuple[int, ...], ...]
    neg: tuple[int, ...]
    inv: tuple[int, ...]

    @property
    def gf(self) -> type[galois.FieldArray]:
        return galois.GF(self.q)


@functools.lru_cache(maxsize=None)
def base_field_tables(q: int) -> BaseFieldTables:
    if q < 2 or not galois.is_prime_power(q):
        raise NotPrimePower(f"{q} is not a prime power")
    gf = galois.GF(q)
    elements = gf.elements
    add = (elements[:, np.newaxis] + elements[np.newaxis, :]).view(np.ndarray)
    mul = (elements[:, np.newaxis] * elements[np.newaxis, :]).view(np.ndarray)
    neg = (-elements).view(np.ndarray)
    inv = [0] + np.reciprocal(elements[1:]).view(np.ndarray).tolist()
    return BaseFieldTables(
        q=q,
        p=int(gf.characteristic),
        e=int(gf.degree),
        add=tuple(tuple(row) for row in add.tolist()),
        mul=tuple(tuple(row) for row in mul.tolist()),
        neg=tuple(neg.tolist()),
        inv=tuple(int(v) for v in inv),
    )


def sort_key(coeffs: Sequence[int]) -> tuple[int, ...]:
    """Lexicographic key comparing coefficients from the top degree down."""
    return tuple(reversed(coeffs))


class FieldCtx:
    """The field F_q[X]/(modulus) of degree d over F_q."""

    def __init__(self, q: int, modulus: Sequence[int]):
        self.tables = base_field_tables(q)
        self.q = q
        self.p = self.tables.p
        self.e = self.tables.e
        self.modulus: Coeffs = tuple(modulus)
        self.d = len(self.modulus) - 1
        self.order = q**self.d
        self._frobenius_columns: dict[int, list[Coeffs]] = {}
        self._frobenius_images: dict[int, Coeffs] = {}
        self._embedding_images: dict[tuple[int, Coeffs], list[Coeffs]] = {}
        self._subfield_bases: dict[int, list[Coeffs]] = {}
        self.zero = FFElem(self, (0,) * self.d)
        self.one = FFElem(self, (1,) + (0,) * (self.d - 1))
        self.gen = FFElem(self, self._reduce([0, 1]))

    # identity and display

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, FieldCtx):
            return NotImplemented
        return self.q == other.q and self.modulus == other.modulus

    def __hash__(self) -> int:
        return hash((self.q, self.modulus))

    def __repr__(self) -> str:
        return f"FieldCtx(q={self.q}, d={self.d}, modulus={list(self.modulus)})"

    def __reduce__(self) -> tuple[Callable[..., FieldCtx], tuple[int, int, Coeffs]]:
        return (field_create, (self.q, self.d, self.modulus))

    # constructors for elements

    def scalar(self, label: int) -> FFElem:
        return FFElem(self, (label,) + (0,) * (self.d - 1))

    def element(self, coeffs: Sequence[int]) -> FFElem:
        """Element with the given coefficients (reduced if longer than d)."""
        return FFElem(self, self._reduce(list(coeffs)))

    def from_int(self, n: int) -> FFElem:
        digits = []
        for _ in range(self.d):
            n, r = divmod(n, self.q)
            digits.append(r)
        return FFElem(self, tuple(digits))

    def elements(self) -> Iterator[FFElem]:
        for digits in itertools.product(range(self.q), repeat=self.d):
            yield FFElem(self, tuple(reversed(digits)))

    def random_element(self, rng: random.Random) -> FFElem:
        return FFElem(self, tuple(rng.randrange(self.q) for _ in range(self.d)))

    def basis(self) -> list[FFElem]:
        return [FFElem(self, tuple(1 if i == k else 0 for i in range(self.d))) for k in range(self.d)]

    # raw arithmetic on coefficient tuples

    def _reduce(self, prod: list[int]) -> Coeffs:
        d = self.d
        add, mul, neg = self.tables.add, self.tables.mul, self.tables.neg
        mod = self.modulus
        for k in range(len(prod) - 1, d - 1, -1):
            c = prod[k]
            if c:
                row = mul[neg[c]]
                base = k - d
                for i in range(d):
                    mi = mod[i]
                    if mi:
                        prod[base + i] = add[prod[base + i]][row[mi]]
                prod[k] = 0
        if len(prod) < d:
            prod = prod + [0] * (d - len(prod))
        return tuple(prod[:d])

    def _add(self, a: Coeffs, b: Coeffs) -> Coeffs:
        add = self.tables.add
        return tuple(add[x][y] for x, y in zip(a, b))

    def _neg(self, a: Coeffs) -> Coeffs:
        neg = self.tables.neg
        return tuple(neg[x] for x in a)

    def _sub(self, a: Coeffs, b: Coeffs) -> Coeffs:
        add, neg = self.tables.add, self.tables.neg
        return tuple(add[x][neg[y]] for x, y in zip(a, b))

    def _scale(self, c: int, a: Coeffs) -> Coeffs:
        row = self.tables.mul[c]
        return tuple(row[x] for x in a)

    def _mul(self, a: Coeffs, b: Coeffs) -> Coeffs:
        add, mul = self.tables.add, self.tables.mul
        if self.d == 1:
            return (mul[a[0]][b[0]],)
        prod = [0] * (2 * self.d - 1)
        for i, ai in enumerate(a):
            if ai:
                row = mul[ai]
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] = add[prod[i + j]][row[bj]]
        return self._reduce(prod)

    def _pow(self, a: Coeffs, n: int) -> Coeffs:
        result = self.one.coeffs
        base = a
        while n:
            if n & 1:
                result = self._mul(result, base)
            base = self._mul(base, base)
            n >>= 1
        return result

    def _inv(self, a: Coeffs) -> Coeffs:
        if not any(a):
            raise ZeroInverse("inverse of zero")
        if self.d == 1:
            return (self.tables.inv[a[0]],)
        gf = self.tables.gf
        poly = galois.Poly(list(a), field=gf, order="asc")
        modulus = galois.Poly(list(self.modulus), field=gf, order="asc")
        _, s, _ = galois.egcd(poly, modulus)
        coeffs = [int(c) for c in s.coefficients(order="asc").view(np.ndarray).tolist()]
        return self._reduce(coeffs)

    # Frobenius

    def _frobenius_image(self, i: int) -> Coeffs:
        """X^{q^i} for 0 <= i < d."""
        cached = self._frobenius_images.get(i)
        if cached is not None:
            return cached
        if i == 0:
            image = self.gen.coeffs
        elif i == 1:
            image = self._pow(self.gen.coeffs, self.q)
        else:
            image = self._apply_columns(self._frobenius_columns_for(1), self._frobenius_image(i - 1))
        self._frobenius_images[i] = image
        return image

    def _frobenius_columns_for(self, i: int) -> list[Coeffs]:
        """Columns X^{k q^i} (k < d) of the q^i-power Frobenius."""
        i %= self.d
        cols = self._frobenius_columns.get(i)
        if cols is None:
            image = self._frobenius_image(i)
            cols = [self.one.coeffs]
            for _ in range(1, self.d):
                cols.append(self._mul(cols[-1], image))
            self._frobenius_columns[i] = cols
        return cols

    def _apply_columns(self, cols: Sequence[Coeffs], a: Coeffs) -> Coeffs:
        add, mul = self.tables.add, self.tables.mul
        res = [0] * self.d
        for k, ak in enumerate(a):
            if ak:
                row = mul[ak]
                for j, cj in enumerate(cols[k]):
                    if cj:
                        res[j] = add[res[j]][row[cj]]
        return tuple(res)

    def _frob(self, a: Coeffs, i: int) -> Coeffs:
        i %= self.d
        if i == 0:
            return a
        return self._apply_columns(self._frobenius_columns_for(i), a)

    def frobenius_matrix_columns(self, i: int) -> list[Coeffs]:
        return list(self._frobenius_columns_for(i))

    # subfields and embeddings

    def subfield_basis(self, k: int) -> list[FFElem]:
        """F_q-basis of the degree-k subfield (the fixed field of the q^k Frobenius)."""
        if self.d % k:
            raise NotADivisor(f"{k} does not divide {self.d}")
        if k not in self._subfield_bases:
            if k == self.d:
                self._subfield_bases[k] = [b.coeffs for b in self.basis()]
            else:
                cols = [self._sub(c, e.coeffs) for c, e in zip(self._frobenius_columns_for(k), self.basis())]
                rows = linalg.columns_to_rows(cols, self.d)
                self._subfield_bases[k] = [tuple(v) for v in linalg.kernel_basis(rows, self.d, self.q)]
        return [FFElem(self, v) for v in self._subfield_bases[k]]

    def embedding_images(self, source: FieldCtx) -> list[Coeffs]:
        """Images of X^k (k < source.d) under the cached embedding source -> self."""
        key = (source.q, source.modulus)
        images = self._embedding_images.get(key)
        if images is None:
            root = least_root_of_modulus(source, self)
            images = [self.one.coeffs]
            for _ in range(1, source.d):
                images.append(self._mul(images[-1], root.coeffs))
            self._embedding_images[key] = images
            logger.debug("Embedding cached", source=repr(source), target=repr(self), root=list(root.coeffs))
        return images

    def linear_map_rows(self, fn: Callable[[FFElem], FFElem]) -> list[list[int]]:
        """Matrix (row-major, over F_q) of an F_q-linear map of this field."""
        cols = [fn(b).coeffs for b in self.basis()]
        return linalg.columns_to_rows(cols, self.d)


class FFElem:
    """An element of a FieldCtx, stored as d coefficients over F_q."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs: Coeffs):
        self.ctx = ctx
        self.coeffs = coeffs

    def _other(self, other: object) -> FFElem:
        if not isinstance(other, FFElem):
            raise ContextMismatch(f"cannot combine FFElem with {type(other).__name__}")
        if other.ctx is not self.ctx and other.ctx != self.ctx:
            raise ContextMismatch(f"{self.ctx!r} vs {other.ctx!r}")
        return other

    def __add__(self, other: object) -> FFElem:
        o = self._other(other)
        return FFElem(self.ctx, self.ctx._add(self.coeffs, o.coeffs))

    def __sub__(self, other: object) -> FFElem:
        o = self._other(other)
        return FFElem(self.ctx, self.ctx._sub(self.coeffs, o.coeffs))

    def __neg__(self) -> FFElem:
        return FFElem(self.ctx, self.ctx._neg(self.coeffs))

    def __mul__(self, other: object) -> FFElem:
        o = self._other(other)
        return FFElem(self.ctx, self.ctx._mul(self.coeffs, o.coeffs))

    def __truediv__(self, other: object) -> FFElem:
        o = self._other(other)
        return self * o.inverse()

    def __pow__(self, n: int) -> FFElem:
        if n < 0:
            return self.inverse() ** (-n)
        return FFElem(self.ctx, self.ctx._pow(self.coeffs, n))

    def inverse(self) -> FFElem:
        return FFElem(self.ctx, self.ctx._inv(self.coeffs))

    def scale(self, label: int) -> FFElem:
        """Multiply by the F_q constant with the given label."""
        return FFElem(self.ctx, self.ctx._scale(label, self.coeffs))

    def frobenius(self, i: int = 1) -> FFElem:
        return FFElem(self.ctx, self.ctx._frob(self.coeffs, i))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FFElem):
            return NotImplemented
        return self.coeffs == other.coeffs and self.ctx == other.ctx

    def __hash__(self) -> int:
        return hash((self.ctx, self.coeffs))

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_one(self) -> bool:
        return self.coeffs == self.ctx.one.coeffs

    def in_base_field(self) -> bool:
        return not any(self.coeffs[1:])

    def base_label(self) -> int:
        """F_q label of an element lying in F_q."""
        if not self.in_base_field():
            raise ValueError(f"{self!r} does not lie in F_{self.ctx.q}")
        return self.coeffs[0]

    def in_subfield(self, k: int) -> bool:
        return self.frobenius(k) == self

    def degree_over_base(self) -> int:
        for k in range(1, self.ctx.d + 1):
            if self.ctx.d % k == 0 and self.in_subfield(k):
                return k
        return self.ctx.d

    def sort_key(self) -> tuple[int, ...]:
        return sort_key(self.coeffs)

    def __repr__(self) -> str:
        if self.ctx.d == 1:
            return str(self.coeffs[0])
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "1" if i == 0 else ("X" if i == 1 else f"X^{i}")
            terms.append(mono if (c == 1 and i) else (f"{c}" if i == 0 else f"{c}*{mono}"))
        return " + ".join(reversed(terms)) if terms else "0"


# public operations


@functools.lru_cache(maxsize=None)
def _cached_field(q: int, modulus: Coeffs) -> FieldCtx:
    ctx = FieldCtx(q, modulus)
    logger.debug("Field context created", q=q, d=ctx.d, modulus=list(modulus))
    return ctx


def default_modulus(q: int, d: int) -> Coeffs:
    """Least monic irreducible of degree d over F_q (galois 'min' ordering)."""
    poly = galois.irreducible_poly(q, d, method="min")
    return tuple(int(c) for c in poly.coefficients(order="asc").view(np.ndarray).tolist())


def field_create(q: int, d: int, modulus: Optional[Sequence[int]] = None) -> FieldCtx:
    """Return the context F_q[X]/(modulus); the least irreducible when omitted."""
    if d < 1:
        raise ValueError(f"extension degree must be positive, got {d}")
    tables = base_field_tables(q)
    if modulus is None:
        return _cached_field(q, default_modulus(q, d))
    mod = tuple(int(c) for c in modulus)
    if len(mod) != d + 1 or mod[-1] != 1 or any(not 0 <= c < q for c in mod):
        raise ReducibleModulus(f"modulus {list(mod)} is not monic of degree {d} over F_{q}")
    poly = galois.Poly(list(mod), field=tables.gf, order="asc")
    if not poly.is_irreducible():
        raise ReducibleModulus(f"modulus {list(mod)} is reducible over F_{q}")
    return _cached_field(q, mod)


def ff_arith(op: str, x: FFElem, y: FFElem | int | None = None) -> FFElem:
    """Dispatch add/mul/inv/pow on field elements."""
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "inv":
        return x.inverse()
    if op == "pow":
        if not isinstance(y, int):
            raise TypeError("pow needs an integer exponent")
        return x**y
    raise ValueError(f"unknown field operation {op!r}")


def frobenius_power(x: FFElem, i: int) -> FFElem:
    """x^{q^i}; negative i applies the inverse automorphism."""
    return x.frobenius(i)


def conjugates(x: FFElem, sub_degree: int) -> list[FFElem]:
    if x.ctx.d % sub_degree:
        raise NotADivisor(f"{sub_degree} does not divide {x.ctx.d}")
    return [x.frobenius(sub_degree * i) for i in range(x.ctx.d // sub_degree)]


def relative_trace_norm(x: FFElem, sub_degree: int) -> tuple[FFElem, FFElem]:
    """Trace and norm of x down to the degree-sub_degree subfield."""
    conj = conjugates(x, sub_degree)
    trace, norm = x.ctx.zero, x.ctx.one
    for c in conj:
        trace = trace + c
        norm = norm * c
    return trace, norm


def absolute_trace(x: FFElem) -> int:
    """Tr_{F_{q^d}/F_q}(x) as an F_q label."""
    return relative_trace_norm(x, 1)[0].base_label()


def least_root_of_modulus(source: FieldCtx, target: FieldCtx) -> FFElem:
    """Lexicographically least root in target of the modulus defining source."""
    if source.q != target.q or target.d % source.d:
        raise IncompatibleDegrees(f"F_q^{source.d} does not embed in F_q^{target.d}")
    basis = target.subfield_basis(source.d)
    poly = FieldPoly.from_base_labels(target, source.modulus)
    roots = poly.split_distinct_roots(basis, source.d)
    if len(roots) != source.d:
        raise IncompatibleDegrees(f"modulus of {source!r} does not split in {target!r}")
    return min(roots, key=lambda r: r.sort_key())


def embed(x: FFElem, target: FieldCtx) -> FFElem:
    """Image of x under the fixed embedding of its field into target."""
    source = x.ctx
    if source is target or source == target:
        return FFElem(target, x.coeffs)
    if source.q != target.q or target.d % source.d:
        raise IncompatibleDegrees(f"cannot embed {source!r} into {target!r}")
    if source.d == 1:
        return target.scalar(x.coeffs[0])
    images = target.embedding_images(source)
    add, mul = target.tables.add, target.tables.mul
    res = [0] * target.d
    for a, image in zip(x.coeffs, images):
        if a:
            row = mul[a]
            for j, c in enumerate(image):
                if c:
                    res[j] = add[res[j]][row[c]]
    return FFElem(target, tuple(res))


def solve_additive(
    ctx: FieldCtx, h: int, scale: FFElem, rhs: FFElem
) -> Optional[tuple[FFElem, list[FFElem]]]:
    """Solve x^{q^h} - scale*x = rhs inside ctx.

    Returns (lexicographically least solution, F_q-basis of the kernel), or None
    when there is no solution in ctx.
    """
    cols_h = ctx._frobenius_columns_for(h)
    cols = [ctx._sub(cols_h[k], ctx._mul(scale.coeffs, b.coeffs)) for k, b in enumerate(ctx.basis())]
    rows = linalg.columns_to_rows(cols, ctx.d)
    solution = linalg.solve_affine(rows, list(rhs.coeffs), ctx.d, ctx.q)
    if solution.particular is None:
        return None
    least = linalg.lex_least_in_coset(solution.particular, solution.kernel, ctx.q)
    return FFElem(ctx, tuple(least)), [FFElem(ctx, tuple(v)) for v in solution.kernel]


def _candidate_degrees(d: int, h: int, p: int) -> list[int]:
    bound = math.lcm(h, d) * p
    return [k for k in range(d, bound + 1, d) if bound % k == 0]


def solve_artin_schreier(
    h: int, c: FFElem, degree_cap: int = DEFAULT_DEGREE_CAP
) -> list[FFElem]:
    """All roots of x^{q^h} - x + c in the smallest extension of c's field with a root.

    Roots are returned in lexicographic order; they live in a common context
    (c's own context when it already contains a root).
    """
    if h < 1:
        raise ValueError(f"h must be positive, got {h}")
    source = c.ctx
    for degree in _candidate_degrees(source.d, h, source.p):
        if degree > degree_cap:
            break
        target = source if degree == source.d else field_create(source.q, degree)
        rhs = -embed(c, target)
        solved = solve_additive(target, h, target.one, rhs)
        if solved is None:
            continue
        base, kernel = solved
        roots = []
        for combo in itertools.product(range(target.q), repeat=len(kernel)):
            x = base
            for label, k in zip(combo, kernel):
                if label:
                    x = x + k.scale(label)
            roots.append(x)
        return sorted(roots, key=lambda r: r.sort_key())
    raise FieldDegreeCapExceeded(f"no Artin-Schreier root within degree {degree_cap}")
