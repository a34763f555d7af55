"""Independent check of Frobenius charpolys through the action on lambda-torsion."""

from __future__ import annotations

from dataclasses import dataclass

import structlog

from ..algebra import linalg
from ..algebra.base_ring import BasePoly
from ..algebra.field_poly import FieldPoly
from ..algebra.finite_field import FFElem, FieldCtx, field_create
from ..algebra.skew import SkewPoly, skew_apply
from ..common.errors import ModuleError, TorsionNotSplit
from .frobenius import CharPolyRecord
from .module import DrinfeldModule, phi_eval

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class LambdaAdicResult:
    """Frobenius on phi[p_aux] as a matrix over A/(p_aux), with its charpoly."""

    p_aux: BasePoly
    residue_field: FieldCtx
    splitting_degree: int
    matrix: tuple[tuple[FFElem, ...], ...]
    charpoly: tuple[FFElem, ...]

    def agrees_with(self, record: CharPolyRecord) -> bool:
        """Whether det(T - Frob) equals P(T) reduced modulo p_aux."""
        expected = tuple(c.residue(self.residue_field) for c in record.coefficients())
        return expected == self.charpoly


def _torsion_kernel(phi_a: SkewPoly, field: FieldCtx) -> list[list[int]]:
    rows = field.linear_map_rows(lambda x: skew_apply(phi_a, x))
    return linalg.kernel_basis(rows, field.d, field.q)


def lambda_adic_oracle(module: DrinfeldModule, p_aux: BasePoly, degree_cap: int = 24) -> LambdaAdicResult:
    """Matrix of the q^m-power Frobenius on phi[p_aux] and its characteristic polynomial."""
    if not module.is_finite:
        raise ModuleError("the oracle needs a module over a finite field")
    if not (p_aux.is_monic() and p_aux.is_irreducible()):
        raise ModuleError(f"{p_aux!r} is not a monic irreducible")
    if p_aux == module.characteristic:
        raise ModuleError("p_aux must differ from the characteristic")
    q, n, m, e = module.q, module.rank, module.field_degree, p_aux.degree
    phi_a = phi_eval(module, p_aux)
    phi_t = module.phi_t

    field = None
    basis: list[list[int]] = []
    k = 1
    while m * k <= degree_cap:
        candidate = field_create(q, m * k)
        basis = _torsion_kernel(phi_a, candidate)
        if len(basis) == n * e:
            field = candidate
            break
        k += 1
    if field is None:
        logger.warning("Torsion oracle declined", p_aux=str(p_aux), cap=degree_cap)
        raise TorsionNotSplit(f"phi[{p_aux!r}] is not rational over F_q^d for d <= {degree_cap}")

    torsion = [field.element(v) for v in basis]

    def coordinates(x: FFElem, span: list[FFElem]) -> list[int]:
        cols = [s.coeffs for s in span]
        rows = linalg.columns_to_rows(cols, field.d)
        return linalg.solve_unique(rows, list(x.coeffs), len(span), q)

    def act_t(x: FFElem) -> FFElem:
        return skew_apply(phi_t, x)

    # greedy A/(p_aux)-basis v_1..v_n with F_q-basis {T^k v_l}
    generators: list[FFElem] = []
    span: list[FFElem] = []
    for v in torsion:
        if len(generators) == n:
            break
        if span and linalg.rank(
            linalg.columns_to_rows([s.coeffs for s in span] + [v.coeffs], field.d), len(span) + 1, q
        ) == len(span):
            continue
        generators.append(v)
        w = v
        for _ in range(e):
            span.append(w)
            w = act_t(w)

    residue = field_create(q, e, modulus=p_aux.coeffs)
    matrix: list[list[FFElem]] = [[residue.zero] * n for _ in range(n)]
    for col, v in enumerate(generators):
        image = v.frobenius(m)
        coords = coordinates(image, span)
        for row in range(n):
            matrix[row][col] = residue.element(coords[row * e : (row + 1) * e])

    char_matrix = [
        [
            FieldPoly(residue, [-matrix[i][j]] + ([residue.one] if i == j else []))
            for j in range(n)
        ]
        for i in range(n)
    ]
    det = linalg.leibniz_determinant(char_matrix)
    coeffs = tuple(det.coeffs)
    logger.debug("Torsion oracle computed", p_aux=str(p_aux), splitting_degree=field.d)
    return LambdaAdicResult(
        p_aux=p_aux,
        residue_field=residue,
        splitting_degree=field.d,
        matrix=tuple(tuple(row) for row in matrix),
        charpoly=coeffs,
    )
