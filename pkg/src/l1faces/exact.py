"""Exact rational vectors, matrices and fraction-free elimination.

Scalars are :class:`fractions.Fraction` (always reduced, positive
denominator).  Vectors are tuples of Fractions and matrices are tuples of
row tuples; both are immutable, so they can be shared freely.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

Vec = tuple  # tuple[Fraction, ...]
Mat = tuple  # tuple[Vec, ...]


def q(value) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` / decimal string to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted as exact rationals")
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


def vec(values: Iterable) -> Vec:
    return tuple(q(v) for v in values)


def mat(rows: Iterable[Iterable]) -> Mat:
    out = tuple(vec(r) for r in rows)
    if out and len({len(r) for r in out}) != 1:
        raise ValueError("matrix rows have different lengths")
    return out


def shape(M: Mat) -> tuple[int, int]:
    return len(M), (len(M[0]) if M else 0)


def fmt(x: Fraction) -> str:
    """Canonical text form: ``"3"``, ``"-3/4"``."""
    return str(x)


def zeros(n: int) -> Vec:
    return (Fraction(0),) * n


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def add(u: Sequence, v: Sequence) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def scale(t, u: Sequence) -> Vec:
    return tuple(t * a for a in u)


def transpose(M: Mat) -> Mat:
    return tuple(zip(*M))


def column(M: Mat, j: int) -> Vec:
    return tuple(row[j] for row in M)


def matvec(M: Mat, v: Sequence) -> Vec:
    return tuple(dot(row, v) for row in M)


def matmul(M: Mat, N: Mat) -> Mat:
    cols = transpose(N)
    return tuple(tuple(dot(r, c) for c in cols) for r in M)


def select_columns(M: Mat, idx: Sequence[int]) -> Mat:
    return tuple(tuple(row[j] for j in idx) for row in M)


def identity(n: int) -> Mat:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def _integer_row(row: Sequence[Fraction]) -> list[int]:
    den = lcm(*(x.denominator for x in row)) if row else 1
    return [int(x * den) for x in row]


def bareiss_echelon(rows: list[list[int]], ncols: int | None = None):
    """Fraction-free row echelon form of an integer matrix (in place).

    Only the first ``ncols`` columns are eligible as pivots (all columns by
    default).  Returns the list of pivot columns; row ``k`` holds pivot
    ``pivots[k]``.  Every division performed is exact.
    """
    nrows = len(rows)
    width = len(rows[0]) if rows else 0
    ncols = width if ncols is None else ncols
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        pr = rows[r]
        for i in range(r + 1, nrows):
            ri = rows[i]
            f = ri[c]
            rows[i] = [(piv * ri[j] - f * pr[j]) // prev for j in range(width)]
        prev = piv
        pivots.append(c)
        r += 1
    return pivots


def rank(M: Mat) -> int:
    """Exact rank by fraction-free elimination."""
    if not M or not M[0]:
        return 0
    rows = [_integer_row(r) for r in M]
    return len(bareiss_echelon(rows))


def solve_linear(M: Mat, v: Sequence) -> tuple[Vec, list[Vec]] | None:
    """Solve ``M x = v`` exactly.

    Returns ``(particular, kernel_basis)`` or ``None`` when the system is
    inconsistent.  The particular solution has zeros on free variables.
    """
    nrows, ncols = shape(M)
    v = vec(v)
    if len(v) != nrows:
        raise ValueError(f"right-hand side has length {len(v)}, expected {nrows}")
    if nrows == 0:
        basis = [tuple(Fraction(int(i == j)) for i in range(ncols)) for j in range(ncols)]
        return zeros(ncols), basis
    rows = [_integer_row(tuple(r) + (b,)) for r, b in zip(M, v)]
    pivots = bareiss_echelon(rows, ncols)
    k = len(pivots)
    if any(rows[i][ncols] != 0 for i in range(k, nrows)):
        return None
    free = [j for j in range(ncols) if j not in set(pivots)]

    def back_substitute(rhs_on: bool, free_values: dict[int, Fraction]) -> Vec:
        x = [Fraction(0)] * ncols
        for j, val in free_values.items():
            x[j] = val
        for i in range(k - 1, -1, -1):
            c = pivots[i]
            row = rows[i]
            s = Fraction(row[ncols]) if rhs_on else Fraction(0)
            for j in range(c + 1, ncols):
                if row[j] and x[j]:
                    s -= row[j] * x[j]
            x[c] = s / row[c]
        return tuple(x)

    particular = back_substitute(True, {})
    basis = [back_substitute(False, {f: Fraction(1)}) for f in free]
    return particular, basis


def columns_independent(M: Mat, idx: Iterable[int]) -> bool:
    """True iff the selected columns of ``M`` are linearly independent.

    The empty selection counts as independent.
    """
    idx = sorted(set(idx))
    ncols = shape(M)[1]
    for j in idx:
        if not 0 <= j < ncols:
            raise IndexError(f"column index {j} out of range for {ncols} columns")
    if not idx:
        return True
    return rank(select_columns(M, idx)) == len(idx)


def to_float(x: Sequence) -> list[float]:
    return [float(a) for a in x]
