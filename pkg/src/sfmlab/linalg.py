"""Exact linear algebra over the rationals.

Plain Gaussian elimination on tuples of Fractions.  Pivots are always the
first nonzero column of a row and rows are consumed in input order, so
ranks, greedy bases, nullspaces, and solutions are all deterministic.  No
floating point, no modular shortcuts.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple[Fraction, ...]


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} vs {len(v)}")
    total = Fraction(0)
    for a, b in zip(u, v):
        if a and b:
            total += a * b
    return total


class _Eliminator:
    """Incremental row-echelon state: pivot column -> normalized row."""

    def __init__(self) -> None:
        self.pivot_rows: dict[int, Vector] = {}

    def reduce(self, vec: Sequence[Fraction]) -> list[Fraction]:
        row = list(vec)
        for col, pivot_row in self.pivot_rows.items():
            coeff = row[col]
            if coeff:
                for j, p in enumerate(pivot_row):
                    if p:
                        row[j] -= coeff * p
        return row

    def insert(self, vec: Sequence[Fraction]) -> bool:
        """Reduce `vec` by the current pivots; keep it if independent.

        Returns True when the vector extended the span.
        """
        row = self.reduce(vec)
        for col, value in enumerate(row):
            if value:
                inv = Fraction(1) / value
                self.pivot_rows[col] = tuple(x * inv for x in row)
                return True
        return False

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)


def greedy_independent(vectors: Sequence[Sequence[Fraction]]) -> list[int]:
    """Indices of the greedily chosen maximal independent subset, in order."""
    elim = _Eliminator()
    kept = []
    for idx, vec in enumerate(vectors):
        if elim.insert(vec):
            kept.append(idx)
    return kept


def rank(vectors: Sequence[Sequence[Fraction]]) -> int:
    elim = _Eliminator()
    for vec in vectors:
        elim.insert(vec)
    return elim.rank


def in_span(target: Sequence[Fraction], basis: Sequence[Sequence[Fraction]]) -> bool:
    elim = _Eliminator()
    for vec in basis:
        elim.insert(vec)
    return not any(elim.reduce(target))


def rref(rows: Sequence[Sequence[Fraction]], ncols: int) -> tuple[list[Vector], list[int]]:
    """Reduced row-echelon form; returns (nonzero rows, pivot columns)."""
    work = [list(Fraction(x) for x in row) for row in rows]
    for row in work:
        if len(row) != ncols:
            raise ValueError("row width disagrees with ncols")
    pivot_cols: list[int] = []
    pivot_of_col: dict[int, int] = {}
    out: list[list[Fraction]] = []
    for row in work:
        for col, r_idx in pivot_of_col.items():
            coeff = row[col]
            if coeff:
                prow = out[r_idx]
                for j in range(ncols):
                    if prow[j]:
                        row[j] -= coeff * prow[j]
        lead = next((j for j in range(ncols) if row[j]), None)
        if lead is None:
            continue
        inv = Fraction(1) / row[lead]
        row = [x * inv for x in row]
        for prow in out:
            coeff = prow[lead]
            if coeff:
                for j in range(ncols):
                    if row[j]:
                        prow[j] -= coeff * row[j]
        pivot_of_col[lead] = len(out)
        out.append(row)
        pivot_cols.append(lead)
    order = sorted(range(len(out)), key=lambda k: pivot_cols[k])
    return [tuple(out[k]) for k in order], sorted(pivot_cols)


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[Vector]:
    """Basis of {x : A x = 0}.

    One basis vector per free column, in increasing column order, with the
    free variable set to 1 and all other free variables 0.
    """
    reduced, pivot_cols = rref(rows, ncols)
    pivot_set = set(pivot_cols)
    free_cols = [j for j in range(ncols) if j not in pivot_set]
    basis: list[Vector] = []
    for free in free_cols:
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for prow, pcol in zip(reduced, pivot_cols):
            vec[pcol] = -prow[free]
        basis.append(tuple(vec))
    return basis


def solve(a_rows: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> Vector | None:
    """One exact solution of A x = b (free variables 0), or None if inconsistent."""
    if len(a_rows) != len(b):
        raise ValueError("rhs length disagrees with row count")
    ncols = len(a_rows[0]) if a_rows else 0
    augmented = [list(row) + [Fraction(rhs)] for row, rhs in zip(a_rows, b)]
    reduced, pivot_cols = rref(augmented, ncols + 1)
    if ncols in pivot_cols:
        return None
    x = [Fraction(0)] * ncols
    for prow, pcol in zip(reduced, pivot_cols):
        x[pcol] = prow[ncols]
    return tuple(x)


def express_in_basis(
    target: Sequence[Fraction], basis: Sequence[Sequence[Fraction]]
) -> Vector | None:
    """Coefficients c with sum(c_k * basis_k) == target, or None if outside the span."""
    if not basis:
        return () if not any(target) else None
    m = len(target)
    columns = [[Fraction(vec[i]) for vec in basis] for i in range(m)]
    return solve(columns, list(target))


def combine(coeffs: Sequence[Fraction], vectors: Sequence[Sequence[Fraction]]) -> Vector:
    """Linear combination sum(c_k * v_k) as an exact tuple."""
    if len(coeffs) != len(vectors):
        raise ValueError("coefficient count disagrees with vector count")
    if not vectors:
        return ()
    m = len(vectors[0])
    out = [Fraction(0)] * m
    for c, vec in zip(coeffs, vectors):
        if not c:
            continue
        for i in range(m):
            if vec[i]:
                out[i] += c * vec[i]
    return tuple(out)
