"""Exact rational linear algebra on top of sympy's DomainMatrix."""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from fractions import Fraction

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

logger = logging.getLogger(__name__)

Vector = list


def _qq(value: object):
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, int):
        return QQ(value)
    return value


def sign(k: int) -> int:
    """(-1)^k as an int, also for negative k."""
    return -1 if k % 2 else 1


def to_fraction(value: object) -> Fraction:
    """Convert a QQ element (or int) to a Fraction."""
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(int(value.numerator), int(value.denominator))


def zeros(rows: int, cols: int) -> DomainMatrix:
    """Return the zero matrix of the given shape over QQ."""
    return DomainMatrix.zeros((rows, cols), QQ)


def from_entries(
    entries: Mapping[tuple[int, int], int | Fraction], rows: int, cols: int
) -> DomainMatrix:
    """Build a sparse QQ matrix from a {(row, col): value} mapping.

    Zero values are dropped.
    """
    dok = {key: _qq(value) for key, value in entries.items() if value != 0}
    return DomainMatrix.from_dok(dok, (rows, cols), QQ)


def from_columns(columns: Sequence[Sequence], length: int) -> DomainMatrix:
    """Build a matrix whose columns are the given dense vectors."""
    dok = {}
    for j, column in enumerate(columns):
        for i, value in enumerate(column):
            if value:
                dok[(i, j)] = _qq(value)
    return DomainMatrix.from_dok(dok, (length, len(columns)), QQ)


def rank(matrix: DomainMatrix) -> int:
    """Exact rank; zero-sized matrices have rank 0."""
    rows, cols = matrix.shape
    if rows == 0 or cols == 0:
        return 0
    return int(matrix.rank())


def submatrix(matrix: DomainMatrix, rows: Sequence[int], cols: Sequence[int]) -> DomainMatrix:
    """Extract the given rows and columns."""
    if not rows or not cols:
        return zeros(len(rows), len(cols))
    return matrix.extract(list(rows), list(cols))


def matmul(left: DomainMatrix, right: DomainMatrix) -> DomainMatrix:
    """Matrix product, tolerating zero-sized factors."""
    if left.shape[1] != right.shape[0]:
        raise ValueError(f"Shape mismatch: {left.shape} x {right.shape}")
    if 0 in left.shape or 0 in right.shape:
        return zeros(left.shape[0], right.shape[1])
    return left.matmul(right)


def is_zero(matrix: DomainMatrix) -> bool:
    """Return True if every entry is zero."""
    if 0 in matrix.shape:
        return True
    return bool(matrix.is_zero_matrix)


def dense_rows(matrix: DomainMatrix) -> list[list[Fraction]]:
    """Return the matrix as nested lists of Fractions."""
    rows, cols = matrix.shape
    out = [[Fraction(0)] * cols for _ in range(rows)]
    for (i, j), value in matrix.to_dok().items():
        out[i][j] = to_fraction(value)
    return out


def apply(matrix: DomainMatrix, vector: Sequence) -> Vector:
    """Multiply a matrix by a dense vector of QQ elements."""
    rows, cols = matrix.shape
    out = [QQ(0)] * rows
    for (i, j), value in matrix.to_dok().items():
        if vector[j]:
            out[i] += value * vector[j]
    return out


def kernel_basis(matrix: DomainMatrix) -> list[Vector]:
    """Return a basis of the kernel as dense vectors of QQ elements."""
    rows, cols = matrix.shape
    if cols == 0:
        return []
    if rows == 0 or matrix.is_zero_matrix:
        return [[QQ(1) if i == j else QQ(0) for i in range(cols)] for j in range(cols)]
    basis = matrix.nullspace()
    return [list(row) for row in basis.to_list()]


def pivot_columns(columns: Sequence[Vector], length: int) -> list[int]:
    """Indices of a maximal independent subset of columns, chosen left to right."""
    if not columns or length == 0:
        return []
    _, pivots = from_columns(columns, length).rref()
    return list(pivots)


def solve_independent(columns: Sequence[Vector], target: Vector, length: int) -> Vector | None:
    """Solve sum(x_i * columns[i]) = target for linearly independent columns.

    Returns:
        The coefficient vector, or None when target is not in the span.
    """
    if not columns:
        return [] if not any(target) else None
    augmented = from_columns([*columns, target], length)
    reduced, pivots = augmented.rref()
    last = len(columns)
    if last in pivots:
        return None
    table = reduced.to_list()
    solution = [QQ(0)] * last
    for row, col in enumerate(pivots):
        solution[col] = table[row][last]
    return solution


def equal(left: DomainMatrix, right: DomainMatrix) -> bool:
    """Entry-wise equality, independent of the internal storage format."""
    if left.shape != right.shape:
        return False

    def nonzero(matrix: DomainMatrix) -> dict:
        if 0 in matrix.shape:
            return {}
        return {key: value for key, value in matrix.to_dok().items() if value}

    return nonzero(left) == nonzero(right)
