"""Small dense GF(2) linear algebra helpers.

All matrices are numpy uint8 arrays with entries in {0, 1}.  Sizes here are
tiny (tens of columns), so plain Gaussian elimination is all we need.
"""

from __future__ import annotations

import numpy as np


def rref(mat: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(2).

    Returns a reduced copy and the list of pivot columns.  Zero rows sink to
    the bottom.
    """
    m = np.array(mat, dtype=np.uint8, copy=True) % 2
    if m.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    n_rows, n_cols = m.shape
    pivots: list[int] = []
    row = 0
    for col in range(n_cols):
        if row >= n_rows:
            break
        hits = np.nonzero(m[row:, col])[0]
        if hits.size == 0:
            continue
        src = row + int(hits[0])
        if src != row:
            m[[row, src]] = m[[src, row]]
        # clear the column everywhere else
        mask = m[:, col].copy()
        mask[row] = 0
        m[mask == 1] ^= m[row]
        pivots.append(col)
        row += 1
    return m, pivots


def rank(mat: np.ndarray) -> int:
    if np.size(mat) == 0:
        return 0
    _, pivots = rref(mat)
    return len(pivots)


def kernel_basis(mat: np.ndarray) -> np.ndarray:
    """Basis (rows) of the null space of ``mat`` over GF(2)."""
    a = np.atleast_2d(np.asarray(mat, dtype=np.uint8)) % 2
    n_cols = a.shape[1]
    reduced, pivots = rref(a)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = np.zeros((len(free), n_cols), dtype=np.uint8)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, p in enumerate(pivots):
            if reduced[i, f]:
                basis[k, p] = 1
    return basis


def solve(mat: np.ndarray, rhs: np.ndarray) -> np.ndarray | None:
    """One solution x of ``mat @ x == rhs`` over GF(2), or None if infeasible."""
    a = np.array(mat, dtype=np.uint8) % 2
    b = np.array(rhs, dtype=np.uint8).reshape(-1, 1) % 2
    aug, pivots = rref(np.hstack([a, b]))
    n_cols = a.shape[1]
    if n_cols in pivots:
        return None
    x = np.zeros(n_cols, dtype=np.uint8)
    for i, col in enumerate(pivots):
        x[col] = aug[i, n_cols]
    return x


class Rowspace:
    """Membership/reduction queries against the row space of a GF(2) matrix."""

    def __init__(self, basis: np.ndarray):
        basis = np.atleast_2d(np.asarray(basis, dtype=np.uint8))
        if basis.size == 0:
            self._rows = np.zeros((0, basis.shape[-1] if basis.ndim == 2 else 0), dtype=np.uint8)
            self._pivots: list[int] = []
        else:
            reduced, pivots = rref(basis)
            self._rows = reduced[: len(pivots)]
            self._pivots = pivots

    @property
    def dim(self) -> int:
        return len(self._pivots)

    def reduce(self, vec: np.ndarray) -> np.ndarray:
        v = np.array(vec, dtype=np.uint8, copy=True) % 2
        for row, piv in zip(self._rows, self._pivots):
            if v[piv]:
                v ^= row
        return v

    def contains(self, vec: np.ndarray) -> bool:
        return not self.reduce(vec).any()

    def contains_many(self, vecs: np.ndarray) -> np.ndarray:
        """Boolean mask over the rows of ``vecs``."""
        v = np.array(vecs, dtype=np.uint8, copy=True) % 2
        for row, piv in zip(self._rows, self._pivots):
            hit = v[:, piv] == 1
            v[hit] ^= row
        return ~v.any(axis=1)
