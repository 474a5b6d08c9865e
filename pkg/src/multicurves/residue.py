"""Linear algebra over the residue field D/(x), backed by flint matrices."""

from __future__ import annotations

import flint

from .dvr import BaseField


def _matrix(rows, nrows, ncols, field: BaseField):
    flat = [c for r in rows for c in r]
    if field.p:
        return flint.nmod_mat(nrows, ncols, [int(c) for c in flat], field.p)
    return flint.fmpq_mat(nrows, ncols, flat)


def residue_pivots(columns, dim: int, field: BaseField) -> list:
    """Indices j such that the unit vectors e_j complete span(columns mod x).

    Columns are vectors of D-scalars of length ``dim``; the result is the set
    of pivot columns of ``[columns | I]`` that fall in the identity block.
    """
    k = len(columns)
    ncols = k + dim
    rows = []
    for i in range(dim):
        row = [c[i].at_zero() for c in columns]
        row += [1 if j == i else 0 for j in range(dim)]
        rows.append(row)
    m = _matrix(rows, dim, ncols, field)
    rref, rank = m.rref()
    pivots = []
    col = 0
    for i in range(rank):
        while rref[i, col] == 0:
            col += 1
        pivots.append(col)
        col += 1
    return [c - k for c in pivots if c >= k]


def residue_rank(rows, nrows: int, ncols: int, field: BaseField) -> int:
    if nrows == 0 or ncols == 0:
        return 0
    vals = [[c.at_zero() for c in r] for r in rows]
    return _matrix(vals, nrows, ncols, field).rank()
