"""Small exact linear algebra over ints, Fractions or ExactScalars."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .exactfield import ExactScalar

__all__ = ["SingularMatrixError", "bareiss_solve", "inverse", "rank", "is_zero"]


class SingularMatrixError(ArithmeticError):
    pass


def is_zero(x) -> bool:
    if isinstance(x, ExactScalar):
        return x.is_zero()
    return x == 0


def _lift(x):
    return Fraction(x) if isinstance(x, int) else x


def _exact_div(a, b):
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        assert r == 0, "Bareiss step was not exact"
        return q
    return a / b


def bareiss_solve(A: Sequence[Sequence], b: Sequence) -> tuple:
    """Solve A x = b by fraction-free elimination.

    Works on the augmented matrix with Bareiss updates, so integer input stays
    integral until the final back substitution.
    """
    n = len(A)
    M = [list(row) + [rhs] for row, rhs in zip(A, b)]
    prev = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if not is_zero(M[r][c])), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
        p = M[c][c]
        for r in range(c + 1, n):
            f = M[r][c]
            M[r] = [_exact_div(p * M[r][j] - f * M[c][j], prev) for j in range(n + 1)]
        prev = p
    x = [None] * n
    for r in range(n - 1, -1, -1):
        s = _lift(M[r][n])
        for j in range(r + 1, n):
            s = s - M[r][j] * x[j]
        x[r] = s / _lift(M[r][r])
    return tuple(_demote(v) for v in x)


def _demote(v):
    if isinstance(v, Fraction) and v.denominator == 1:
        return v.numerator
    return v


def inverse(A: Sequence[Sequence]) -> list[list]:
    """Gauss-Jordan inverse; integer entries come back as int where possible."""
    n = len(A)
    M = [[_lift(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(A)]
    for c in range(n):
        piv = next((r for r in range(c, n) if not is_zero(M[r][c])), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
        p = M[c][c]
        if not (p == 1):
            M[c] = [v / p for v in M[c]]
        for r in range(n):
            if r != c:
                f = M[r][c]
                if not is_zero(f):
                    M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return [[_demote(v) for v in row[n:]] for row in M]


def rank(rows: Sequence[Sequence]) -> int:
    M = [[_lift(x) for x in row] for row in rows]
    if not M:
        return 0
    ncols = len(M[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if not is_zero(M[i][c])), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        p = M[r][c]
        for i in range(r + 1, len(M)):
            f = M[i][c]
            if not is_zero(f):
                q = f / p
                M[i] = [a - q * b for a, b in zip(M[i], M[r])]
        r += 1
        if r == len(M):
            break
    return r
