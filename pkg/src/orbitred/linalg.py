"""Exact linear algebra over polynomial and rational-function entries.

``det_fraction_free`` is Bareiss one-step elimination: every intermediate
entry is a minor of the input matrix, so all divisions are exact and no
rational functions appear.  ``solve_linear`` runs Gaussian elimination over
the fraction field and reports, besides the solution, the pivots whose
nonvanishing the computed solution requires.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .poly import Poly, grlex_key, try_divide_exact
from .ratfun import RatFun


def det_fraction_free(matrix: Sequence[Sequence[Poly]]) -> Poly:
    """Exact determinant of a square polynomial matrix (Bareiss elimination)."""
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("matrix is not square")
    if n == 0:
        raise ValueError("empty matrix has no determinant")
    variables = matrix[0][0].vars
    m = [[entry for entry in row] for row in matrix]
    sign = 1
    prev = Poly.const(variables, 1)
    for k in range(n - 1):
        if m[k][k].is_zero():
            swap = None
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    # fewest terms keeps the intermediate minors small
                    if swap is None or len(m[i][k]) < len(m[swap][k]):
                        swap = i
            if swap is None:
                return Poly.zero(variables)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                if prev.total_degree() == 0 and len(prev) <= 1:
                    q = num * (1 / prev.constant_value()) if not prev.is_zero() else num
                else:
                    q = try_divide_exact(num, prev)
                    assert q is not None, "Bareiss division must be exact"
                m[i][j] = q
            m[i][k] = Poly.zero(variables)
        prev = m[k][k]
    result = m[n - 1][n - 1]
    return result if sign > 0 else -result


@dataclass
class LinearSolution:
    """Result of solving ``M xi + f = 0`` over the parameter fraction field."""

    solution: list[RatFun] | None
    rank: int
    pivot_minors: list[Poly]
    consistent: bool
    pivot_columns: list[int] = field(default_factory=list)


PivotKey = Callable[[RatFun, int], tuple]


def default_pivot_key(entry: RatFun, row_index: int) -> tuple:
    """Prefer few-term pivots, then small leading monomial, then row order."""
    num = entry.num_primitive()
    lead_exps, _ = num.leading()
    return (len(num), grlex_key(lead_exps), row_index)


def gauss_eliminate(
    matrix: list[list[RatFun]],
    rhs: list[RatFun] | None,
    pivot_key: PivotKey = default_pivot_key,
) -> tuple[list[tuple[int, int, RatFun]], list[list[RatFun]], list[RatFun] | None, list[int]]:
    """Column-sequential elimination; returns (pivots, rows, rhs, unused rows).

    Pivots are (column, row, pivot-value-at-selection) triples in selection
    order.  Rows not used as pivot rows are fully reduced on exit.
    """
    nrows = len(matrix)
    ncols = len(matrix[0]) if nrows else 0
    rows = [list(r) for r in matrix]
    b = list(rhs) if rhs is not None else None
    used = [False] * nrows
    pivots: list[tuple[int, int, RatFun]] = []
    for col in range(ncols):
        candidates = [i for i in range(nrows) if not used[i] and not rows[i][col].is_zero()]
        if not candidates:
            continue
        pick = min(candidates, key=lambda i: pivot_key(rows[i][col], i))
        used[pick] = True
        piv = rows[pick][col]
        pivots.append((col, pick, piv))
        for i in range(nrows):
            if i == pick or used[i] or rows[i][col].is_zero():
                continue
            factor = rows[i][col] / piv
            for j in range(col, ncols):
                if not rows[pick][j].is_zero():
                    rows[i][j] = rows[i][j] - factor * rows[pick][j]
            if b is not None:
                b[i] = b[i] - factor * b[pick]
    free_rows = [i for i in range(nrows) if not used[i]]
    return pivots, rows, b, free_rows


def solve_linear(
    matrix: Sequence[Sequence[Poly]] | Sequence[Sequence[RatFun]],
    f: Sequence[Poly] | Sequence[RatFun],
) -> LinearSolution:
    """Solve ``M xi + f = 0`` symbolically, treating parameters as generic.

    Returns the solution with free coordinates set to zero, the generic
    rank, and the pivot polynomials (numerators, primitive parts) whose
    nonvanishing the solution path requires.  When the system is
    inconsistent for generic parameter values, ``consistent`` is False and
    ``solution`` is None.
    """
    nrows = len(matrix)
    if nrows != len(f):
        raise ValueError("dimension mismatch between matrix and right-hand side")
    if nrows == 0:
        return LinearSolution([], 0, [], True)
    ncols = len(matrix[0])
    if any(len(row) != ncols for row in matrix):
        raise ValueError("ragged matrix")

    def lift(x) -> RatFun:
        return x if isinstance(x, RatFun) else RatFun(x)

    rows = [[lift(e) for e in row] for row in matrix]
    variables = rows[0][0].vars if ncols else lift(f[0]).vars
    rhs = [-lift(x) for x in f]

    pivots, red_rows, red_rhs, free_rows = gauss_eliminate(rows, rhs)
    consistent = all(red_rhs[i].is_zero() for i in free_rows)
    minors = [piv.num_primitive() for _, _, piv in pivots]
    cols = [c for c, _, _ in pivots]
    if not consistent:
        return LinearSolution(None, len(pivots), minors, False, cols)

    solution = [RatFun.zero(variables) for _ in range(ncols)]
    for col, row, _ in reversed(pivots):
        acc = red_rhs[row]
        for j in range(col + 1, ncols):
            if not red_rows[row][j].is_zero() and not solution[j].is_zero():
                acc = acc - red_rows[row][j] * solution[j]
        solution[col] = acc / red_rows[row][col]
    return LinearSolution(solution, len(pivots), minors, True, cols)
