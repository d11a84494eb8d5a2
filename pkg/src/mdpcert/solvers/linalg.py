"""Exact dense LU factorisation over the rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence


class SingularMatrix(ArithmeticError):
    pass


def lu_decompose(A: Sequence[Sequence[Fraction]]):
    """Doolittle LU with row pivoting; returns ``(LU, perm)`` packed in one matrix."""
    n = len(A)
    LU = [list(map(Fraction, row)) for row in A]
    perm = list(range(n))
    for k in range(n):
        piv = next((i for i in range(k, n) if LU[i][k] != 0), None)
        if piv is None:
            raise SingularMatrix(f"zero pivot in column {k}")
        if piv != k:
            LU[k], LU[piv] = LU[piv], LU[k]
            perm[k], perm[piv] = perm[piv], perm[k]
        pk = LU[k][k]
        row_k = LU[k]
        for i in range(k + 1, n):
            row_i = LU[i]
            if row_i[k] == 0:
                continue
            f = row_i[k] / pk
            row_i[k] = f
            for j in range(k + 1, n):
                if row_k[j]:
                    row_i[j] -= f * row_k[j]
    return LU, perm


def lu_solve(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> List[Fraction]:
    n = len(A)
    if n == 0:
        return []
    LU, perm = lu_decompose(A)
    y = [Fraction(0)] * n
    for i in range(n):
        acc = Fraction(b[perm[i]])
        row = LU[i]
        for j in range(i):
            if row[j]:
                acc -= row[j] * y[j]
        y[i] = acc
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        acc = y[i]
        row = LU[i]
        for j in range(i + 1, n):
            if row[j]:
                acc -= row[j] * x[j]
        x[i] = acc / row[i]
    return x
