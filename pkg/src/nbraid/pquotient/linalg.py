"""Incremental row echelon forms over F_p."""

from __future__ import annotations

import numpy as np

__all__ = ["Echelon", "rank_mod_p"]


class Echelon:
    """Rows are added one at a time and kept reduced against earlier pivots.

    Pivots are taken at the leftmost nonzero column, so columns listed
    first are eliminated in preference to later ones.
    """

    def __init__(self, ncols: int, p: int):
        self.ncols = ncols
        self.p = p
        self.rows: dict[int, np.ndarray] = {}  # pivot column -> row with 1 at pivot
        self._inv = [0] + [pow(a, -1, p) for a in range(1, p)]

    def reduce(self, row: np.ndarray) -> np.ndarray:
        row = np.asarray(row, dtype=np.int64) % self.p
        # rows are fully reduced, so one pass over the pivots suffices
        for col, prow in self.rows.items():
            c = row[col]
            if c:
                row = (row - c * prow) % self.p
        return row

    def add(self, row) -> bool:
        """Add ``row``; returns True when it increased the rank."""
        row = self.reduce(row)
        nz = np.flatnonzero(row)
        if nz.size == 0:
            return False
        col = int(nz[0])
        row = (row * self._inv[int(row[col])]) % self.p
        for other, orow in self.rows.items():
            c = orow[col]
            if c:
                self.rows[other] = (orow - c * row) % self.p
        self.rows[col] = row
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)

    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def free_columns(self) -> list[int]:
        return [c for c in range(self.ncols) if c not in self.rows]

    def solve_pivot(self, col: int) -> dict[int, int]:
        """Express pivot column ``col`` as a combination of free columns."""
        row = self.rows[col]
        return {int(k): int(-row[k] % self.p) for k in np.flatnonzero(row) if k != col}


def rank_mod_p(matrix, p: int) -> int:
    ech = Echelon(len(matrix[0]) if len(matrix) else 0, p)
    for row in matrix:
        ech.add(row)
    return ech.rank
