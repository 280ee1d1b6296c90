"""Exact linear algebra over rationals: rank, square solve, one-dimensional kernels.

Everything works on plain lists of :class:`fractions.Fraction`; matrices are
lists of rows.  No tolerances anywhere: a pivot is any exactly nonzero entry.
"""

from __future__ import annotations

from fractions import Fraction

Row = list[Fraction]


def _eliminate(rows: list[Row]) -> tuple[list[Row], list[int]]:
    """Forward-eliminate in place on a copy; return (echelon rows, pivot columns)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: list[Row]) -> int:
    return len(_eliminate(rows)[1])


def solve_square(matrix: list[Row], rhs: list[Fraction]) -> list[Fraction] | None:
    """Solve ``matrix @ x = rhs`` for a square system; None when singular."""
    n = len(matrix)
    aug = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    m, pivots = _eliminate(aug)
    if pivots != list(range(n)):
        return None
    return [m[i][n] for i in range(n)]


def kernel_vector(rows: list[Row], ncols: int) -> list[Fraction] | None:
    """A spanning vector of the kernel when it is exactly one-dimensional.

    Returns None when the nullity differs from 1 (the caller decides whether
    that is an error).  Any nonzero scaling of the result is equally valid.
    """
    m, pivots = _eliminate([list(r) for r in rows])
    free = [c for c in range(ncols) if c not in pivots]
    if len(free) != 1:
        return None
    fc = free[0]
    v = [Fraction(0)] * ncols
    v[fc] = Fraction(1)
    for i, pc in enumerate(pivots):
        v[pc] = -m[i][fc]
    return v


def dot(a: list[Fraction] | tuple[Fraction, ...], b: list[Fraction] | tuple[Fraction, ...]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))
