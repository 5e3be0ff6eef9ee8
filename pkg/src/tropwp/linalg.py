"""Exact Gaussian elimination over the rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import SingularSystem


def _copy(M: Sequence[Sequence]) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in M]


def _det_int(A: list[list[int]]) -> int:
    # fraction-free Bareiss elimination; every division is exact
    n = len(A)
    sign, prev = 1, 1
    for c in range(n - 1):
        p = next((r for r in range(c, n) if A[r][c]), None)
        if p is None:
            return 0
        if p != c:
            A[c], A[p] = A[p], A[c]
            sign = -sign
        pc = A[c][c]
        for r in range(c + 1, n):
            arc, row = A[r][c], A[r]
            for k in range(c + 1, n):
                row[k] = (row[k] * pc - arc * A[c][k]) // prev
        prev = pc
    return sign * A[n - 1][n - 1] if n else 1


def det(M: Sequence[Sequence]) -> Fraction:
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("determinant of a non-square matrix")
    if all(type(x) is int for row in M for x in row):
        return Fraction(_det_int([list(row) for row in M]))
    A = _copy(M)
    sign = 1
    result = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            sign = -sign
        pivot = A[c][c]
        result *= pivot
        for r in range(c + 1, n):
            if A[r][c] != 0:
                f = A[r][c] / pivot
                row_c, row_r = A[c], A[r]
                for k in range(c, n):
                    row_r[k] -= f * row_c[k]
    return sign * result


def solve(M: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Solve ``M x = b`` for square nonsingular ``M``."""
    A = _copy(M)
    n = len(A)
    rhs = [Fraction(x) for x in b]
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            raise SingularSystem("matrix is singular")
        A[c], A[p] = A[p], A[c]
        rhs[c], rhs[p] = rhs[p], rhs[c]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c] / A[c][c]
                for k in range(c, n):
                    A[r][k] -= f * A[c][k]
                rhs[r] -= f * rhs[c]
    return [rhs[i] / A[i][i] for i in range(n)]
