"""Exact integer Smith normal form for boundary matrices.

Boundary matrices are extremely sparse and mostly carry unit entries, so the
reduction first eliminates unit pivots on a sparse column representation and only
then runs a dense minimal-pivot diagonalization on whatever is left.
"""

from math import gcd

import numpy as np
from scipy import sparse

from src.errors import InvariantViolationError

COEFFICIENT_LIMIT = 1 << 62

Column = dict[int, int]


def _to_columns(matrix) -> list[Column]:
    if sparse.issparse(matrix):
        csc = sparse.csc_matrix(matrix)
        columns = []
        for j in range(csc.shape[1]):
            start, end = csc.indptr[j], csc.indptr[j + 1]
            columns.append(
                {int(r): int(v) for r, v in zip(csc.indices[start:end], csc.data[start:end]) if v}
            )
        return columns
    array = np.asarray(matrix)
    if array.size == 0:
        return []
    if array.ndim != 2:
        raise ValueError(f"expected a 2D matrix, got shape {array.shape}")
    return [
        {int(r): int(array[r, j]) for r in np.flatnonzero(array[:, j])}
        for j in range(array.shape[1])
    ]


def _guard(value: int) -> int:
    if abs(value) > COEFFICIENT_LIMIT:
        raise InvariantViolationError(
            f"Smith normal form coefficient {value} exceeds the signed 64-bit range"
        )
    return value


def _eliminate_units(columns: list[Column]) -> tuple[int, list[Column]]:
    """Pivot on +-1 entries until none remain.

    A unit pivot at (i, j) clears row i with column operations, after which
    column j and row i split off as a 1 on the diagonal.

    Returns:
        Number of unit pivots and the remaining nonzero columns
    """
    rows: dict[int, set[int]] = {}
    for j, column in enumerate(columns):
        for r in column:
            rows.setdefault(r, set()).add(j)

    pending = [j for j in range(len(columns)) if columns[j]]
    pending.reverse()
    units = 0
    while pending:
        j = pending.pop()
        column = columns[j]
        if not column:
            continue
        pivot_row = min((r for r, v in column.items() if v in (1, -1)), default=None)
        if pivot_row is None:
            continue
        unit = column[pivot_row]
        for k in sorted(rows[pivot_row] - {j}):
            other = columns[k]
            factor = other[pivot_row] * unit
            for r, v in column.items():
                value = other.get(r, 0) - factor * v
                if value:
                    if r not in other:
                        rows[r].add(k)
                    other[r] = _guard(value)
                elif r in other:
                    del other[r]
                    rows[r].discard(k)
            pending.append(k)
        for r in column:
            rows[r].discard(j)
        columns[j] = {}
        units += 1
    return units, [column for column in columns if column]


def _smallest_entry(m: list[list[int]], s: int) -> tuple[int, int] | None:
    best = None
    best_value = 0
    for i in range(s, len(m)):
        row = m[i]
        for j in range(s, len(row)):
            v = row[j]
            if v and (best is None or abs(v) < best_value):
                best, best_value = (i, j), abs(v)
                if best_value == 1:
                    return best
    return best


def _swap_into_place(m: list[list[int]], s: int, i: int, j: int) -> None:
    if i != s:
        m[s], m[i] = m[i], m[s]
    if j != s:
        for row in m:
            row[s], row[j] = row[j], row[s]


def _diagonalize(m: list[list[int]]) -> list[int]:
    """Dense diagonalization with minimal-absolute-value pivots."""
    diagonal = []
    size = min(len(m), len(m[0])) if m else 0
    for s in range(size):
        position = _smallest_entry(m, s)
        if position is None:
            break
        _swap_into_place(m, s, *position)
        while True:
            pivot = m[s][s]
            settled = True
            for i in range(s + 1, len(m)):
                if m[i][s]:
                    q = m[i][s] // pivot
                    m[i] = [_guard(a - q * b) for a, b in zip(m[i], m[s])]
                    settled = settled and not m[i][s]
            for j in range(s + 1, len(m[s])):
                if m[s][j]:
                    q = m[s][j] // pivot
                    for row in m:
                        row[j] = _guard(row[j] - q * row[s])
                    settled = settled and not m[s][j]
            if settled:
                break
            # A nonzero remainder is strictly smaller than the pivot.
            candidates = [(abs(m[i][s]), i, s) for i in range(s + 1, len(m)) if m[i][s]]
            candidates += [(abs(m[s][j]), s, j) for j in range(s + 1, len(m[s])) if m[s][j]]
            _, i, j = min(candidates)
            _swap_into_place(m, s, i, j)
        diagonal.append(abs(m[s][s]))
    return diagonal


def _divisibility_chain(values: list[int]) -> list[int]:
    chain = sorted(values)
    for i in range(len(chain)):
        for j in range(i + 1, len(chain)):
            g = gcd(chain[i], chain[j])
            if g != chain[i]:
                chain[i], chain[j] = g, chain[i] * chain[j] // g
    return chain


def smith_normal_form(matrix) -> tuple[int, list[int]]:
    """Rank and invariant factors of an integer matrix.

    Args:
        matrix: Dense array-like or scipy sparse matrix with integer entries

    Returns:
        (rank, diagonal) where diagonal lists the nonzero invariant factors
        d_1 | d_2 | ... | d_rank, all positive

    Raises:
        InvariantViolationError: A coefficient grew beyond the signed 64-bit range
    """
    columns = _to_columns(matrix)
    units, residue = _eliminate_units(columns)
    diagonal = [1] * units
    if residue:
        row_ids = sorted({r for column in residue for r in column})
        index = {r: i for i, r in enumerate(row_ids)}
        dense = [[0] * len(residue) for _ in row_ids]
        for j, column in enumerate(residue):
            for r, v in column.items():
                dense[index[r]][j] = v
        diagonal += _diagonalize(dense)
    return len(diagonal), _divisibility_chain(diagonal)


def rank_mod2(matrix) -> int:
    """Rank over GF(2)."""
    if sparse.issparse(matrix):
        matrix = matrix.toarray()
    array = np.asarray(matrix)
    if array.size == 0:
        return 0
    work = (array % 2).astype(np.uint8)
    rows, cols = work.shape
    rank = 0
    for col in range(cols):
        hits = np.flatnonzero(work[rank:, col])
        if not len(hits):
            continue
        pivot = rank + hits[0]
        if pivot != rank:
            work[[rank, pivot]] = work[[pivot, rank]]
        others = np.flatnonzero(work[:, col])
        others = others[others != rank]
        work[others] ^= work[rank]
        rank += 1
        if rank == rows:
            break
    return rank
