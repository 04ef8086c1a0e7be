"""Exact row reduction over Fraction, dense and sparse flavors."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

SparseRow = dict[int, Fraction]


class Echelon:
    """Incremental reduced row echelon form over integer column indices.

    Rows are sparse dicts.  The pivot of a row is its smallest column.
    Stored rows are kept normalized (pivot coefficient 1) and mutually
    back-substituted, so at any time they are the RREF of everything
    inserted so far.  With that invariant a row reduces fully in one
    pass: subtracting a stored row can only touch non-pivot columns.
    """

    def __init__(self):
        self.pivot_rows: dict[int, SparseRow] = {}

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)

    def reduce(self, row: SparseRow) -> SparseRow:
        """Return ``row`` reduced against the current rows (nothing stored)."""
        work = {c: v for c, v in row.items() if v}
        hits = sorted(c for c in work if c in self.pivot_rows)
        for col in hits:
            factor = work.get(col)
            if not factor:
                continue
            for c2, v2 in self.pivot_rows[col].items():
                new = work.get(c2, Fraction(0)) - factor * v2
                if new:
                    work[c2] = new
                else:
                    work.pop(c2, None)
        return work

    def add(self, row: SparseRow) -> SparseRow | None:
        """Insert a row; return its reduced normalized form, or None if dependent."""
        reduced = self.reduce(row)
        if not reduced:
            return None
        pivot = min(reduced)
        inv = Fraction(1) / reduced[pivot]
        normalized = {c: v * inv for c, v in reduced.items()}
        for other in self.pivot_rows.values():
            factor = other.get(pivot)
            if factor is None:
                continue
            for col, val in normalized.items():
                new = other.get(col, Fraction(0)) - factor * val
                if new:
                    other[col] = new
                else:
                    other.pop(col, None)
        self.pivot_rows[pivot] = normalized
        return normalized

    def contains(self, row: SparseRow) -> bool:
        return not self.reduce(row)

    def rows(self) -> list[SparseRow]:
        return [dict(self.pivot_rows[p]) for p in sorted(self.pivot_rows)]

    def pivots(self) -> list[int]:
        return sorted(self.pivot_rows)


def _to_sparse(row: Iterable) -> SparseRow:
    return {i: Fraction(v) for i, v in enumerate(row) if v}


def rref(matrix: list[list]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form of a dense matrix; returns (rows, pivot columns)."""
    ech = Echelon()
    for row in matrix:
        ech.add(_to_sparse(row))
    ncols = max((len(r) for r in matrix), default=0)
    pivots = ech.pivots()
    dense = []
    for p in pivots:
        row = ech.pivot_rows[p]
        dense.append([row.get(c, Fraction(0)) for c in range(ncols)])
    return dense, pivots


def rank(matrix: list[list]) -> int:
    ech = Echelon()
    for row in matrix:
        ech.add(_to_sparse(row))
    return ech.rank


def kernel_basis(matrix: list[list], ncols: int) -> list[list[Fraction]]:
    """Basis of the right kernel, one vector per free column, in column order."""
    reduced, pivots = rref(matrix)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            entry = row[f] if f < len(row) else Fraction(0)
            if entry:
                vec[p] = -entry
        basis.append(vec)
    return basis


def solve(matrix: list[list], rhs: list) -> list[Fraction] | None:
    """One exact solution of M x = b with free variables set to 0, or None."""
    if not matrix:
        return [] if all(not v for v in rhs) else None
    ncols = max(len(r) for r in matrix)
    ech = Echelon()
    for row, b in zip(matrix, rhs):
        sparse = _to_sparse(row)
        if b:
            sparse[ncols] = Fraction(b)
        ech.add(sparse)
    if ncols in ech.pivot_rows:
        return None  # a 0 = 1 row survived: inconsistent
    solution = [Fraction(0)] * ncols
    for pivot, row in ech.pivot_rows.items():
        solution[pivot] = row.get(ncols, Fraction(0))
    return solution
