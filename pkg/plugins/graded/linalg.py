"""
Exact Linear Algebra Module

Thin layer over sympy's DomainMatrix over QQ. Vectors are sparse dicts
index -> rational; matrices are given as lists of such column vectors.
Elimination is sympy's fraction-free RREF, so pivots depend only on the
matrix, never on numerical heuristics.
"""
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

Vector = Dict[int, object]


def _rref(rows: Dict[int, Dict[int, object]], nrows: int, ncols: int) -> Tuple[Dict[int, Dict[int, object]], Tuple[int, ...]]:
    """RREF of a sparse row dict; returns (reduced rows, pivot columns)."""
    rows = {i: {j: QQ.convert(v) for j, v in row.items() if v} for i, row in rows.items()}
    rows = {i: row for i, row in rows.items() if row}
    if nrows == 0 or ncols == 0 or not rows:
        return {}, ()

    matrix = DomainMatrix(rows, (nrows, ncols), QQ)
    reduced, pivots = matrix.rref(method="FF")

    out: Dict[int, Dict[int, object]] = {}
    for (i, j), value in reduced.to_dok().items():
        if value:
            out.setdefault(i, {})[j] = value
    return out, tuple(pivots)


def _columns_to_rows(columns: Sequence[Vector]) -> Dict[int, Dict[int, object]]:
    rows: Dict[int, Dict[int, object]] = {}
    for j, column in enumerate(columns):
        for i, value in column.items():
            if value:
                rows.setdefault(i, {})[j] = value
    return rows


def pivot_columns(columns: Sequence[Vector], nrows: int) -> Tuple[int, ...]:
    """Indices of the first maximal independent subset of the columns."""
    _, pivots = _rref(_columns_to_rows(columns), nrows, len(columns))
    return pivots


def rank(columns: Sequence[Vector], nrows: int) -> int:
    return len(pivot_columns(columns, nrows))


def nullspace(columns: Sequence[Vector], nrows: int) -> List[Vector]:
    """Echelon basis of {c : sum_j c_j * columns[j] = 0}, one vector per free column."""
    ncols = len(columns)
    reduced, pivots = _rref(_columns_to_rows(columns), nrows, ncols)
    pivot_set = set(pivots)

    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vector: Vector = {free: QQ(1)}
        for i, pivot in enumerate(pivots):
            coefficient = reduced.get(i, {}).get(free)
            if coefficient:
                vector[pivot] = -coefficient
        basis.append(vector)
    return basis


def solve(columns: Sequence[Vector], nrows: int, rhs: Vector) -> Optional[Vector]:
    """
    Solve sum_j x_j * columns[j] = rhs exactly.

    Returns:
        A particular solution (free variables set to zero) or None when the
        system is inconsistent.
    """
    ncols = len(columns)
    rows = _columns_to_rows(columns)
    for i, value in rhs.items():
        if value:
            rows.setdefault(i, {})[ncols] = value
    reduced, pivots = _rref(rows, nrows, ncols + 1)
    if ncols in pivots:
        return None

    solution: Vector = {}
    for i, pivot in enumerate(pivots):
        value = reduced.get(i, {}).get(ncols)
        if value:
            solution[pivot] = value
    return solution


class RowReducer:
    """Reduces vectors modulo the span of a fixed set of row vectors."""

    def __init__(self, rows: Sequence[Vector], ncols: int):
        indexed = {i: dict(row) for i, row in enumerate(rows)}
        self.rows, self.pivots = _rref(indexed, len(rows), ncols)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, vector: Vector) -> Vector:
        """Canonical residual: zero on every pivot column."""
        residual = dict(vector)
        for i, pivot in enumerate(self.pivots):
            coefficient = residual.get(pivot)
            if not coefficient:
                continue
            for j, value in self.rows.get(i, {}).items():
                updated = residual.get(j, 0) - coefficient * value
                if updated:
                    residual[j] = updated
                else:
                    residual.pop(j, None)
        return residual
