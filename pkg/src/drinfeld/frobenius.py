"""Characteristic polynomial of the Frobenius endomorphism tau^m over a finite field.

The coefficients c_0..c_{n-1} of P(T) = T^n + c_{n-1} T^{n-1} + ... + c_0 are the
unique elements of F_q[t] within the degree bounds with

    tau^(n m) + sum_i phi_{c_i} tau^(m i) = 0   in F_x[tau].

Expanding phi_{c_i} = sum_k c_ik phi_{t^k} turns this into an F_q-linear system in
the c_ik, one block of m equations per tau-coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import structlog

from ..algebra import linalg
from ..algebra.base_ring import BasePoly
from ..algebra.finite_field import base_field_tables
from ..algebra.skew import SkewPoly
from ..common.errors import InvariantViolation, ModuleError, NonUniqueSolution, NoSolution
from ..common.schema import CharPolyRecordModel
from .module import DrinfeldModule, phi_eval, phi_powers, reduce_at

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class CharPolyRecord:
    """P(T) of Frobenius at the point p of degree m, for a rank-n module."""

    p: BasePoly
    m: int
    n: int
    c: tuple[BasePoly, ...]
    a_x: BasePoly
    epsilon: Optional[int] = None
    hasse_ok: bool = field(default=True)

    def coefficients(self) -> list[BasePoly]:
        """c_0, ..., c_{n-1}, 1."""
        return list(self.c) + [BasePoly.one(self.p.q)]

    def to_model(self) -> CharPolyRecordModel:
        return CharPolyRecordModel(
            p=self.p.to_list(),
            m=self.m,
            n=self.n,
            c=[ci.to_list() for ci in self.c],
            a_x=self.a_x.to_list(),
            epsilon=self.epsilon,
            hasse_ok=self.hasse_ok,
        )

    @classmethod
    def from_model(cls, model: CharPolyRecordModel, q: int) -> CharPolyRecord:
        return cls(
            p=BasePoly(q, tuple(model.p)),
            m=model.m,
            n=model.n,
            c=tuple(BasePoly(q, tuple(ci)) for ci in model.c),
            a_x=BasePoly(q, tuple(model.a_x)),
            epsilon=model.epsilon,
            hasse_ok=model.hasse_ok,
        )


def degree_bounds(n: int, m: int) -> list[int]:
    """ceil((n - i) m / n) for i < n."""
    return [-(-(n - i) * m // n) for i in range(n)]


def _coordinates(f: SkewPoly, top: int, d: int) -> list[int]:
    coords: list[int] = []
    for i in range(top + 1):
        c = f.coefficient(i)
        coords.extend(c.coeffs if c else (0,) * d)
    return coords


def _solve(module: DrinfeldModule, bounds: list[int]) -> list[BasePoly]:
    q, n, m = module.q, module.rank, module.field_degree
    powers = phi_powers(module, max(bounds))
    columns: list[SkewPoly] = []
    layout: list[tuple[int, int]] = []
    for i, bound in enumerate(bounds):
        for k in range(bound + 1):
            columns.append(powers[k].shift(m * i))
            layout.append((i, k))
    top = max([n * m] + [col.degree for col in columns])
    vectors = [_coordinates(col, top, m) for col in columns]
    rhs = [0] * ((top + 1) * m)
    rhs[n * m * m] = base_field_tables(q).neg[1]
    rows = linalg.columns_to_rows(vectors, len(rhs))
    solution = linalg.solve_unique(rows, rhs, len(vectors), q)
    digits: list[list[int]] = [[0] * (bound + 1) for bound in bounds]
    for (i, k), value in zip(layout, solution):
        digits[i][k] = value
    return [BasePoly(q, tuple(d)) for d in digits]


def skew_identity(module: DrinfeldModule, c: list[BasePoly]) -> SkewPoly:
    """tau^(n m) + sum_i phi_{c_i} tau^(m i); zero exactly when c is the charpoly."""
    n, m = module.rank, module.field_degree
    total = SkewPoly.tau(module.coefficient_field, n * m)
    for i, ci in enumerate(c):
        total = total + phi_eval(module, ci).shift(m * i)
    return total


def unit_epsilon(characteristic: BasePoly, c0: BasePoly, n: int, m: int) -> Optional[int]:
    """The F_q label eps with (-1)^n c_0 = eps * p^(m/deg p), if c_0 has that shape."""
    if characteristic.degree < 1 or m % characteristic.degree:
        return None
    value = c0 if n % 2 == 0 else -c0
    quotient, remainder = divmod(value, characteristic ** (m // characteristic.degree))
    if not remainder.is_zero() or quotient.degree != 0:
        return None
    return quotient.coeffs[0]


def hasse_check(record: CharPolyRecord) -> bool:
    """n deg(a_x) <= m."""
    return record.n * record.a_x.degree <= record.m


def frob_charpoly(module: DrinfeldModule) -> CharPolyRecord:
    """Characteristic polynomial of Frobenius for a module over a finite field."""
    if not module.is_finite:
        raise ModuleError("frob_charpoly needs a module over a finite field")
    n, m = module.rank, module.field_degree
    bounds = degree_bounds(n, m)
    try:
        c = _solve(module, bounds)
    except NoSolution:
        logger.warning("Charpoly system infeasible, relaxing degree bounds", n=n, m=m, bounds=bounds)
        c = _solve(module, [b + 1 for b in bounds])
    except NonUniqueSolution:
        logger.error("Charpoly system has a kernel", n=n, m=m, characteristic=str(module.characteristic))
        raise
    if not skew_identity(module, c).is_zero():
        raise InvariantViolation(f"charpoly {c} does not annihilate Frobenius")
    characteristic = module.characteristic
    assert isinstance(characteristic, BasePoly)
    record = CharPolyRecord(
        p=characteristic,
        m=m,
        n=n,
        c=tuple(c),
        a_x=-c[n - 1],
        epsilon=unit_epsilon(characteristic, c[0], n, m),
    )
    return replace(record, hasse_ok=hasse_check(record))


def trace_of_frobenius(module: DrinfeldModule) -> BasePoly:
    return frob_charpoly(module).a_x


def charpoly_at(module: DrinfeldModule, p: BasePoly) -> CharPolyRecord:
    """frob_charpoly of the reduction of a generic-characteristic module at p."""
    return frob_charpoly(reduce_at(module, p))
