"""Drinfeld modules phi: F_q[t] -> L[tau] given by phi_t."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence, Union

import structlog

from ..algebra.base_ring import BasePoly, PolynomialRing
from ..algebra.field_poly import FieldPoly
from ..algebra.finite_field import FFElem, FieldCtx, field_create
from ..algebra.skew import SkewPoly, skew_apply
from ..common.errors import (
    BadReduction,
    ConstantImage,
    ModuleError,
    ZeroLeadingCoefficient,
)
from ..common.schema import CoefficientField, ModuleDescriptor

logger = structlog.get_logger(__name__)

GENERIC = "generic"

CoefficientDomain = Union[FieldCtx, PolynomialRing]


@dataclass(frozen=True, eq=False)
class DrinfeldModule:
    """A Drinfeld module over a finite field or (integrally) over F_q(t)."""

    coefficient_field: CoefficientDomain
    phi_t: SkewPoly
    rank: int
    characteristic: Union[str, BasePoly]

    @property
    def q(self) -> int:
        return self.coefficient_field.q

    @property
    def is_finite(self) -> bool:
        return isinstance(self.coefficient_field, FieldCtx)

    @property
    def is_generic(self) -> bool:
        return self.characteristic == GENERIC

    @property
    def field_degree(self) -> int:
        """[L : F_q] for a finite coefficient field."""
        if not isinstance(self.coefficient_field, FieldCtx):
            raise ModuleError("the rational coefficient field has no finite degree")
        return self.coefficient_field.d

    @property
    def coefficients(self) -> tuple[Any, ...]:
        return self.phi_t.coeffs

    def scalar(self, label: int) -> Any:
        """The F_q constant with the given label, inside the coefficient field."""
        ring = self.coefficient_field
        if isinstance(ring, FieldCtx):
            return ring.scalar(label)
        return BasePoly.constant(ring.q, label)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DrinfeldModule):
            return NotImplemented
        return self.phi_t == other.phi_t

    def __hash__(self) -> int:
        return hash(self.phi_t)

    def __repr__(self) -> str:
        return f"DrinfeldModule(phi_t={self.phi_t!r}, rank={self.rank}, characteristic={self.characteristic!r})"


def minimal_polynomial(x: FFElem) -> BasePoly:
    """Minimal polynomial of x over F_q, as a monic element of F_q[t]."""
    ctx = x.ctx
    poly = FieldPoly(ctx, [ctx.one])
    degree = x.degree_over_base()
    for i in range(degree):
        poly = poly * FieldPoly(ctx, [-x.frobenius(i), ctx.one])
    return BasePoly(ctx.q, tuple(c.base_label() for c in poly.coeffs))


def _coerce_coefficients(field: CoefficientDomain, values: Sequence[Any]) -> list[Any]:
    out = []
    for v in values:
        if isinstance(field, FieldCtx):
            if isinstance(v, FFElem):
                out.append(v)
            elif isinstance(v, BasePoly):
                out.append(v.residue(field))
            else:
                out.append(field.element(list(v)))
        else:
            if isinstance(v, BasePoly):
                out.append(v)
            else:
                out.append(BasePoly(field.q, tuple(v)))
    return out


def drinfeld_create(coefficient_field: CoefficientDomain, coefficients: Sequence[Any]) -> DrinfeldModule:
    """Build phi from phi_t = b_0 + b_1 tau + ... + b_n tau^n.

    Coefficients are FFElem/BasePoly values or ascending coefficient lists.
    """
    b = _coerce_coefficients(coefficient_field, coefficients)
    if len(b) < 2:
        raise ConstantImage("phi_t must have tau-degree at least 1")
    if not b[-1]:
        raise ZeroLeadingCoefficient("leading coefficient b_n of phi_t is zero")
    rank = len(b) - 1
    characteristic: Union[str, BasePoly]
    if isinstance(coefficient_field, FieldCtx):
        characteristic = minimal_polynomial(b[0])
    else:
        if b[0] != BasePoly.t(coefficient_field.q):
            raise ModuleError("generic-characteristic modules need b_0 = t")
        characteristic = GENERIC
    module = DrinfeldModule(
        coefficient_field=coefficient_field,
        phi_t=SkewPoly(coefficient_field, b),
        rank=rank,
        characteristic=characteristic,
    )
    logger.debug("Drinfeld module created", rank=rank, characteristic=str(characteristic))
    return module


def phi_eval(module: DrinfeldModule, a: BasePoly) -> SkewPoly:
    """phi_a by Horner's rule in t."""
    ring = module.coefficient_field
    result = SkewPoly.zero(ring)
    for c in reversed(a.coeffs):
        result = result * module.phi_t + SkewPoly.constant(ring, module.scalar(c))
    return result


def phi_powers(module: DrinfeldModule, k_max: int) -> list[SkewPoly]:
    """[phi_1, phi_t, ..., phi_{t^k_max}]."""
    powers = [SkewPoly.one(module.coefficient_field)]
    for _ in range(k_max):
        powers.append(powers[-1] * module.phi_t)
    return powers


@dataclass(frozen=True)
class AdditivePolynomial:
    """sum coeffs[i] * X^(q^i)."""

    q: int
    coeffs: tuple[Any, ...]

    @property
    def degree(self) -> int:
        """Degree in X."""
        return self.q ** (len(self.coeffs) - 1) if self.coeffs else -1

    @property
    def is_separable(self) -> bool:
        return bool(self.coeffs) and bool(self.coeffs[0])

    def terms(self) -> dict[int, Any]:
        """Exponent of X to coefficient, nonzero terms only."""
        return {self.q**i: c for i, c in enumerate(self.coeffs) if c}

    def __call__(self, x: FFElem) -> FFElem:
        ring = self.coeffs[0].ctx if self.coeffs and isinstance(self.coeffs[0], FFElem) else x.ctx
        return skew_apply(SkewPoly(ring, self.coeffs), x)


def torsion_polynomial(module: DrinfeldModule, a: BasePoly) -> AdditivePolynomial:
    """The additive polynomial phi_a(X) whose roots form phi[a]."""
    if a.is_zero():
        raise ValueError("phi[0] is not a finite torsion module")
    return AdditivePolynomial(module.q, phi_eval(module, a).coeffs)


def has_good_reduction(module: DrinfeldModule, p: BasePoly) -> bool:
    if not module.is_generic:
        raise ModuleError("reduction is defined for generic-characteristic modules")
    return not p.divides(module.phi_t.leading())


def reduce_at(module: DrinfeldModule, p: BasePoly) -> DrinfeldModule:
    """Reduce the coefficients of phi modulo the prime p."""
    if not module.is_generic:
        raise ModuleError("reduction is defined for generic-characteristic modules")
    if not (p.is_monic() and p.is_irreducible()):
        raise ModuleError(f"{p!r} is not a monic irreducible")
    ctx = field_create(p.q, p.degree, modulus=p.coeffs)
    reduced = [b.residue(ctx) for b in module.phi_t.coeffs]
    if not reduced[-1]:
        raise BadReduction(f"leading coefficient vanishes modulo {p!r}")
    return DrinfeldModule(
        coefficient_field=ctx,
        phi_t=SkewPoly(ctx, reduced),
        rank=module.rank,
        characteristic=p,
    )


def from_descriptor(descriptor: Union[ModuleDescriptor, dict[str, Any]]) -> DrinfeldModule:
    """Build a module from its JSON descriptor {q, field, phi_t}."""
    model = descriptor if isinstance(descriptor, ModuleDescriptor) else ModuleDescriptor.model_validate(descriptor)
    field: CoefficientDomain
    if model.field == "rational":
        field = PolynomialRing(model.q)
    else:
        field = field_create(model.q, model.field.d, modulus=model.field.modulus)
    return drinfeld_create(field, model.phi_t)


def to_descriptor(module: DrinfeldModule) -> ModuleDescriptor:
    field = module.coefficient_field
    if isinstance(field, FieldCtx):
        return ModuleDescriptor(
            q=module.q,
            field=CoefficientField(d=field.d, modulus=list(field.modulus)),
            phi_t=[list(c.coeffs) for c in module.phi_t.coeffs],
        )
    return ModuleDescriptor(q=module.q, field="rational", phi_t=[c.to_list() for c in module.phi_t.coeffs])
