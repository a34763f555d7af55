"""The u-series conjugating phi_y to tau^h over a finite coefficient field.

With phi_y = sum_{j<=h} b_j tau^j and u = delta * sum_i a_i tau^-i, the identity
phi_y u = u tau^h holds exactly when delta^(q^h - 1) = 1/b_h, a_0 = 1 and

    a_s^(q^h) - a_s = -sum_{j<h, s+j>=h} delta^(q^j - 1) b_j a_{s+j-h}^(q^j).

Every a_s solves an Artin-Schreier equation, so the coefficients live in a finite
extension of L. All of them are solved in one working field; when a step has no
root there the whole series is recomputed in the larger field that has one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import structlog

from ..algebra.base_ring import BasePoly
from ..algebra.finite_field import (
    DEFAULT_DEGREE_CAP,
    FFElem,
    FieldCtx,
    embed,
    field_create,
    relative_trace_norm,
    solve_additive,
    solve_artin_schreier,
)
from ..algebra.skew import SkewLaurentTrunc, SkewPoly
from ..common.errors import FieldDegreeCapExceeded, InvariantViolation, ModuleError
from .module import DrinfeldModule, phi_eval

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class FrobeniusInConstants:
    """u^-1 tau^m u for the Frobenius tau^m of L, with its constancy check."""

    v: SkewLaurentTrunc
    m: int
    h: int
    in_constants: bool


class _NeedsLargerField(Exception):
    def __init__(self, degree: int):
        super().__init__(degree)
        self.degree = degree


def _find_delta(field: FieldCtx, h: int, b_h: FFElem) -> Optional[FFElem]:
    """A nonzero delta in field with delta^(q^h - 1) = 1/b_h, if one exists."""
    solved = solve_additive(field, h, b_h.inverse(), field.zero)
    if solved is None or not solved[1]:
        return None
    return solved[1][0]


def _series_in(field: FieldCtx, phi_y: SkewPoly, h: int, prec: int, degree_cap: int) -> SkewLaurentTrunc:
    b = [embed(c, field) for c in phi_y.coeffs]
    delta = _find_delta(field, h, b[h])
    if delta is None:
        # delta exists in degree D*r where r is the order of N_{F_q^D / F_q^h}(1/b_h)
        _, norm = relative_trace_norm(b[h].inverse(), h)
        order, power = 1, norm
        while not power.is_one():
            power = power * norm
            order += 1
        raise _NeedsLargerField(field.d * order)
    delta_inv = delta.inverse()
    # delta^(q^j - 1) b_j for j < h
    weights = [delta.frobenius(j) * delta_inv * b[j] for j in range(h)]
    a: list[FFElem] = [field.one]
    for s in range(1, prec):
        c = field.zero
        for j in range(max(0, h - s), h):
            if weights[j]:
                c = c + weights[j] * a[s + j - h].frobenius(j)
        solved = solve_additive(field, h, field.one, -c)
        if solved is None:
            roots = solve_artin_schreier(h, c, degree_cap=degree_cap)
            raise _NeedsLargerField(roots[0].ctx.d)
        a.append(solved[0])
    return SkewLaurentTrunc(field, 0, [delta * ai for ai in a])


def conjugate_to_constants(
    module: DrinfeldModule,
    y: BasePoly,
    prec: int,
    degree_cap: int = DEFAULT_DEGREE_CAP,
) -> SkewLaurentTrunc:
    """u with phi_y u = u tau^h to prec coefficients, h = n deg y."""
    if not module.is_finite:
        raise ModuleError("conjugate_to_constants needs a finite coefficient field")
    if y.degree < 1:
        raise ModuleError("y must be nonconstant")
    if prec < 1:
        raise ValueError(f"precision must be positive, got {prec}")
    base = module.coefficient_field
    assert isinstance(base, FieldCtx)
    phi_y = phi_eval(module, y)
    h = phi_y.degree
    degree = math.lcm(base.d, h)
    while True:
        if degree > degree_cap:
            raise FieldDegreeCapExceeded(f"u-series needs a field of degree {degree} > {degree_cap}")
        field = field_create(base.q, degree)
        try:
            u = _series_in(field, phi_y, h, prec, degree_cap)
            break
        except _NeedsLargerField as grow:
            new_degree = math.lcm(degree, grow.degree)
            logger.info("u-series field degree restart", h=h, degree=degree, new_degree=new_degree)
            degree = new_degree

    lhs = SkewLaurentTrunc.from_poly(phi_y, prec + h).embed_into(field) * u
    rhs = u * SkewLaurentTrunc.tau(field, h, prec + h)
    if not lhs.equals_to_precision(rhs):
        raise InvariantViolation("phi_y u differs from u tau^h within the computed precision")
    logger.debug("u-series computed", h=h, field_degree=field.d, prec=prec)
    return u


def conjugate(module: DrinfeldModule, u: SkewLaurentTrunc, a: BasePoly) -> SkewLaurentTrunc:
    """u^-1 phi_a u, to the precision of u."""
    phi_a = phi_eval(module, a)
    series = SkewLaurentTrunc.from_poly(phi_a, u.precision + max(phi_a.degree, 0)).embed_into(u.ctx)
    return u.inverse() * series * u


def in_constants(x: SkewLaurentTrunc, h: int) -> bool:
    """Whether every known coefficient lies in F_{q^h}, i.e. x commutes with tau^h."""
    return all(c.frobenius(h) == c for c in x.coeffs)


def frobenius_in_constants(
    module: DrinfeldModule, y: BasePoly, prec: int, degree_cap: int = DEFAULT_DEGREE_CAP
) -> FrobeniusInConstants:
    """Conjugate the Frobenius tau^m of L by the u-series of phi_y."""
    u = conjugate_to_constants(module, y, prec, degree_cap=degree_cap)
    m = module.field_degree
    h = phi_eval(module, y).degree
    tau_m = SkewLaurentTrunc.tau(u.ctx, m, prec)
    v = u.inverse() * tau_m * u
    return FrobeniusInConstants(v=v, m=m, h=h, in_constants=in_constants(v, h))
