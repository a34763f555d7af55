"""Dense linear algebra over F_q, backed by galois field arrays.

Vectors and matrices cross this boundary as plain lists of F_q labels (galois'
integer representation); callers never see FieldArray objects.
"""

import itertools
from dataclasses import dataclass
from typing import Any, Optional, Sequence

import galois
import numpy as np
import structlog

from ..common.errors import NoSolution, NonUniqueSolution

logger = structlog.get_logger(__name__)

Vector = list[int]


@dataclass(frozen=True)
class AffineSolution:
    """Solution set x0 + span(kernel) of a linear system."""

    particular: Optional[Vector]
    kernel: list[Vector]

    @property
    def feasible(self) -> bool:
        return self.particular is not None


def _field(q: int) -> type[galois.FieldArray]:
    return galois.GF(q)


def _as_array(rows: Sequence[Sequence[int]], ncols: int) -> np.ndarray:
    if not rows:
        return np.zeros((0, ncols), dtype=np.int64)
    return np.array(rows, dtype=np.int64).reshape(len(rows), ncols)


def columns_to_rows(columns: Sequence[Sequence[int]], nrows: int) -> list[Vector]:
    """Transpose a list of column vectors into row-major form."""
    return [[col[i] for col in columns] for i in range(nrows)]


def rank(rows: Sequence[Sequence[int]], ncols: int, q: int) -> int:
    if not rows or ncols == 0:
        return 0
    gf = _field(q)
    return int(np.linalg.matrix_rank(gf(_as_array(rows, ncols))))


def kernel_basis(rows: Sequence[Sequence[int]], ncols: int, q: int) -> list[Vector]:
    """Basis of {x : A x = 0} as a list of length-ncols vectors."""
    if ncols == 0:
        return []
    if not rows:
        return [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    gf = _field(q)
    null = gf(_as_array(rows, ncols)).null_space()
    return [list(map(int, v)) for v in null.view(np.ndarray).tolist()]


def solve_affine(
    rows: Sequence[Sequence[int]], rhs: Sequence[int], ncols: int, q: int
) -> AffineSolution:
    """Solve A x = b over F_q; returns a particular solution (or None) and the kernel."""
    kernel = kernel_basis(rows, ncols, q)
    if not rows:
        return AffineSolution(particular=[0] * ncols, kernel=kernel)
    gf = _field(q)
    augmented = np.hstack(
        [_as_array(rows, ncols), np.array(rhs, dtype=np.int64).reshape(-1, 1)]
    )
    reduced = gf(augmented).row_reduce().view(np.ndarray)
    x = [0] * ncols
    for row in reduced.tolist():
        pivot = next((i for i, v in enumerate(row) if v), None)
        if pivot is None:
            continue
        if pivot == ncols:
            return AffineSolution(particular=None, kernel=kernel)
        x[pivot] = int(row[ncols])
    return AffineSolution(particular=x, kernel=kernel)


def solve_unique(
    rows: Sequence[Sequence[int]], rhs: Sequence[int], ncols: int, q: int
) -> Vector:
    """Unique solution of A x = b, or NoSolution / NonUniqueSolution."""
    solution = solve_affine(rows, rhs, ncols, q)
    if solution.particular is None:
        raise NoSolution(f"inconsistent system ({len(rows)} x {ncols}) over F_{q}")
    if solution.kernel:
        raise NonUniqueSolution(
            f"kernel of dimension {len(solution.kernel)} over F_{q}"
        )
    return solution.particular


def lex_least_in_coset(particular: Vector, kernel: Sequence[Vector], q: int) -> Vector:
    """Lexicographically least element of particular + span(kernel).

    Vectors are compared from the last coordinate down, so the reduction runs on
    the kernel in reversed coordinates and clears every pivot position.
    """
    if not kernel:
        return list(particular)
    gf = _field(q)
    reversed_kernel = gf(np.array([list(reversed(v)) for v in kernel], dtype=np.int64))
    echelon = reversed_kernel.row_reduce()
    x = gf(np.array(list(reversed(particular)), dtype=np.int64))
    for row in echelon:
        nonzero = np.flatnonzero(row.view(np.ndarray))
        if nonzero.size == 0:
            continue
        pivot = int(nonzero[0])
        if x[pivot] != 0:
            x = x - x[pivot] * row
    return list(reversed([int(v) for v in x.view(np.ndarray).tolist()]))


def matrix_vector(matrix: Sequence[Sequence[int]], vector: Sequence[int], q: int) -> Vector:
    gf = _field(q)
    if not matrix:
        return []
    product = gf(np.array(matrix, dtype=np.int64)) @ gf(np.array(vector, dtype=np.int64))
    return [int(v) for v in product.view(np.ndarray).tolist()]


def permutation_sign(perm: Sequence[int]) -> int:
    inversions = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return -1 if inversions % 2 else 1


def leibniz_determinant(matrix: Sequence[Sequence[Any]]) -> Any:
    """Determinant over any commutative ring whose elements support +, - and *.

    Expands over all permutations, so it is meant for the rank-sized matrices
    of the torsion oracle and the division algebra.
    """
    total = None
    for perm in itertools.permutations(range(len(matrix))):
        term = matrix[0][perm[0]]
        for row in range(1, len(matrix)):
            term = term * matrix[row][perm[row]]
        if permutation_sign(perm) < 0:
            term = -term
        total = term if total is None else total + term
    if total is None:
        raise ValueError("determinant of an empty matrix")
    return total
