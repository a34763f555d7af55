"""Tests for linear algebra over F_q."""

import random

import pytest

from src.algebra import linalg
from src.common.errors import NonUniqueSolution, NoSolution


class TestSolve:
    """Test linear solves over prime fields."""

    def setup_method(self):
        self.rng = random.Random(4242)

    def test_unique_solution(self):
        """Test a 2 x 2 system over F_3."""
        rows = [[1, 1], [0, 2]]
        assert linalg.solve_unique(rows, [2, 1], 2, 3) == [0, 2]

    def test_inconsistent(self):
        """Test x = 0 and x = 1 has no solution."""
        with pytest.raises(NoSolution):
            linalg.solve_unique([[1], [1]], [0, 1], 1, 2)

    def test_kernel_rejected(self):
        """Test an underdetermined system is not unique."""
        with pytest.raises(NonUniqueSolution):
            linalg.solve_unique([[1, 1]], [1], 2, 2)

    def test_random_affine(self):
        """Test particular solutions and kernels on random systems over F_5."""
        for _ in range(200):
            nrows, ncols = self.rng.randrange(1, 5), self.rng.randrange(1, 5)
            rows = [[self.rng.randrange(5) for _ in range(ncols)] for _ in range(nrows)]
            x = [self.rng.randrange(5) for _ in range(ncols)]
            rhs = linalg.matrix_vector(rows, x, 5)
            solution = linalg.solve_affine(rows, rhs, ncols, 5)
            assert solution.feasible
            assert linalg.matrix_vector(rows, solution.particular, 5) == rhs
            for v in solution.kernel:
                assert linalg.matrix_vector(rows, v, 5) == [0] * nrows
            assert len(solution.kernel) == ncols - linalg.rank(rows, ncols, 5)


class TestLexLeast:
    """Test the deterministic coset representative."""

    def test_clears_top_coordinate(self):
        """Test (1, 1) + span((0, 1)) over F_2 has least element (1, 0)."""
        assert linalg.lex_least_in_coset([1, 1], [[0, 1]], 2) == [1, 0]

    def test_no_kernel(self):
        """Test an empty kernel returns the particular solution."""
        assert linalg.lex_least_in_coset([2, 1], [], 3) == [2, 1]

    def test_least_by_enumeration(self):
        """Test against brute force over F_3 in dimension 3."""
        particular, kernel = [1, 2, 1], [[1, 0, 1], [0, 1, 1]]
        coset = []
        for a in range(3):
            for b in range(3):
                coset.append([(particular[i] + a * kernel[0][i] + b * kernel[1][i]) % 3 for i in range(3)])
        expected = min(coset, key=lambda v: tuple(reversed(v)))
        assert linalg.lex_least_in_coset(particular, kernel, 3) == expected


class TestDeterminant:
    """Test the permutation-expansion determinant."""

    def test_integers(self):
        """Test a 3 x 3 integer determinant."""
        matrix = [[2, 0, 1], [1, 3, 2], [1, 1, 2]]
        assert linalg.leibniz_determinant(matrix) == 6

    def test_signs(self):
        """Test permutation signs."""
        assert linalg.permutation_sign([0, 1, 2]) == 1
        assert linalg.permutation_sign([1, 0, 2]) == -1
        assert linalg.permutation_sign([1, 2, 0]) == 1

    def test_empty(self):
        """Test the empty matrix is rejected."""
        with pytest.raises(ValueError):
            linalg.leibniz_determinant([])
