"""Gaussian elimination over F_p on int64 numpy arrays."""

from __future__ import annotations

import numpy as np


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``a`` mod p and the pivot columns.

    Pivoting takes the first row with a nonzero entry in the column.
    """
    m = np.array(a, dtype=np.int64) % p
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        m[r] = m[r] * pow(int(m[r, c]), -1, p) % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            m[hit] = (m[hit] - np.outer(col[hit], m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: np.ndarray, p: int) -> int:
    return len(rref(a, p)[1])


class ColumnSolver:
    """Solve ``a @ x = b`` mod p for a fixed matrix of full column rank.

    Precomputes a set of independent rows and the inverse of the square
    submatrix they span, so each solve is one matrix-vector product
    followed by a consistency check against the full system.
    """

    def __init__(self, a: np.ndarray, p: int):
        self.a = np.array(a, dtype=np.int64) % p
        self.p = p
        n_rows, n_cols = self.a.shape
        _, row_pivots = rref(self.a.T, p)
        if len(row_pivots) != n_cols:
            raise ValueError(f"matrix has rank {len(row_pivots)} < {n_cols} columns")
        self.rows = row_pivots
        sub = self.a[self.rows]
        aug = np.concatenate([sub, np.eye(n_cols, dtype=np.int64)], axis=1)
        red, _ = rref(aug, p)
        self.inverse = red[:, n_cols:]

    def solve(self, b: np.ndarray) -> np.ndarray | None:
        """Return x with ``a @ x == b`` mod p, or None if inconsistent."""
        b = np.asarray(b, dtype=np.int64) % self.p
        x = self.inverse @ b[self.rows] % self.p
        if np.array_equal(self.a @ x % self.p, b):
            return x
        return None
