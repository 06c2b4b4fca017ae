"""Exact linear algebra over the rationals on sparse rows.

A matrix is a list of rows, each row a ``{column: Fraction}`` dict, plus a
column count.  Vectors use the same dict form.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Row = dict


def _axpy(row: Row, factor: Fraction, other: Row) -> Row:
    out = dict(row)
    for c, v in other.items():
        nv = out.get(c, 0) - factor * v
        if nv:
            out[c] = nv
        else:
            out.pop(c, None)
    return out


class Echelon:
    """Incrementally built row echelon form with leading coefficient 1."""

    def __init__(self):
        self.pivots: dict[int, Row] = {}

    def reduce(self, row: Row) -> Row:
        row = {c: Fraction(v) for c, v in row.items() if v}
        while row:
            c = min(row)
            piv = self.pivots.get(c)
            if piv is None:
                return row
            row = _axpy(row, row[c], piv)
        return row

    def add(self, row: Row) -> bool:
        """Insert ``row``; returns False when it was already in the span."""
        row = self.reduce(row)
        if not row:
            return False
        c = min(row)
        lead = row[c]
        self.pivots[c] = {k: v / lead for k, v in row.items()}
        return True

    def contains(self, row: Row) -> bool:
        return not self.reduce(row)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduced(self) -> dict[int, Row]:
        """Fully reduced rows keyed by pivot column."""
        rows = {c: dict(r) for c, r in self.pivots.items()}
        for c in sorted(rows, reverse=True):
            pr = rows[c]
            for c2, r2 in rows.items():
                if c2 < c and c in r2:
                    rows[c2] = _axpy(r2, r2[c], pr)
        return rows


def rank(rows: Sequence[Row]) -> int:
    e = Echelon()
    for r in rows:
        e.add(r)
    return e.rank


def row_space_basis(rows: Sequence[Row]) -> list[Row]:
    e = Echelon()
    for r in rows:
        e.add(r)
    red = e.reduced()
    return [red[c] for c in sorted(red)]


def nullspace(rows: Sequence[Row], ncols: int) -> list[Row]:
    """Basis of ``{x : A x = 0}``, one vector per free column, in column order."""
    e = Echelon()
    for r in rows:
        e.add(r)
    red = e.reduced()
    basis = []
    for f in range(ncols):
        if f in red:
            continue
        v = {f: Fraction(1)}
        for p, r in red.items():
            if f in r:
                v[p] = -r[f]
        basis.append(v)
    return basis


def solve(rows: Sequence[Row], rhs: Sequence, ncols: int) -> Row | None:
    """One solution of ``A x = b`` with free variables zero, or None."""
    e = Echelon()
    for r, b in zip(rows, rhs):
        aug = dict(r)
        if b:
            aug[ncols] = Fraction(b)
        e.add(aug)
    if ncols in e.pivots:
        return None
    red = e.reduced()
    return {p: r[ncols] for p, r in red.items() if r.get(ncols)}


def transpose(rows: Sequence[Row], ncols: int) -> list[Row]:
    cols: list[Row] = [{} for _ in range(ncols)]
    for i, r in enumerate(rows):
        for c, v in r.items():
            cols[c][i] = v
    return cols


def mat_vec(rows: Sequence[Row], vec: Row) -> list[Fraction]:
    return [sum((v * vec.get(c, 0) for c, v in r.items()), Fraction(0)) for r in rows]


def columns_to_rows(columns: Sequence[Row], nrows: int) -> list[Row]:
    """Matrix with the given column vectors, as rows."""
    rows: list[Row] = [{} for _ in range(nrows)]
    for j, col in enumerate(columns):
        for i, v in col.items():
            if v:
                rows[i][j] = Fraction(v)
    return rows


def dense(rows: Sequence[Row], ncols: int) -> list[list[Fraction]]:
    return [[Fraction(r.get(c, 0)) for c in range(ncols)] for r in rows]
