"""Dense exact linear algebra modulo a prime.

Matrices are 2-D numpy integer arrays with entries reduced into [0, q); a
block vector is a list of equal-shape 2-D arrays (matrix-valued entries of a
length-N vector). Elimination uses first-nonzero pivoting: over a finite
field there is no pivot-magnitude concern, so this keeps results
deterministic.
"""

from __future__ import annotations

import math
from itertools import combinations

import numpy as np

SUBMATRIX_CHECK_CAP = 10**6


class SingularMatrixError(ValueError):
    """Raised when a square system is rank deficient; carries the actual rank."""

    def __init__(self, rank: int, size: int):
        super().__init__(f"matrix is singular: rank {rank} < {size}")
        self.rank = rank
        self.size = size


def as_matrix(rows, q: int) -> np.ndarray:
    """Copy input into an int64 matrix with entries reduced mod q."""
    m = np.array(rows, dtype=np.int64)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {m.shape}")
    return m % q


def matmul_mod(a, b, q: int) -> np.ndarray:
    """Exact (a @ b) mod q; falls back to bigint dtype if int64 could overflow."""
    a = np.asarray(a, dtype=np.int64) % q
    b = np.asarray(b, dtype=np.int64) % q
    inner = a.shape[-1]
    if inner * (q - 1) ** 2 < 2**63:
        return (a @ b) % q
    return np.asarray((a.astype(object) @ b.astype(object)) % q, dtype=np.int64)


def rank(rows, q: int) -> int:
    """Rank over F_q by Gaussian elimination."""
    m = as_matrix(rows, q)
    n_rows, n_cols = m.shape
    r = 0
    for c in range(n_cols):
        pivot = _first_nonzero(m[:, c], r)
        if pivot is None:
            continue
        if pivot != r:
            m[[r, pivot]] = m[[pivot, r]]
        _eliminate_below(m, r, c, q)
        r += 1
        if r == n_rows:
            break
    return r


def _first_nonzero(col: np.ndarray, start: int):
    nz = np.nonzero(col[start:])[0]
    return None if nz.size == 0 else start + int(nz[0])


def _eliminate_below(m: np.ndarray, r: int, c: int, q: int):
    inv = pow(int(m[r, c]), -1, q)
    below = m[r + 1:, c]
    if below.size:
        factors = below * inv % q
        m[r + 1:] = (m[r + 1:] - factors[:, None] * m[r]) % q


def select_information_columns(rows, q: int) -> list[int]:
    """Greedy leftmost pivot columns of a full-row-rank k x n matrix.

    Returns the lexicographically first set of k column indices whose square
    submatrix is invertible; raises if the matrix has rank below k.
    """
    m = as_matrix(rows, q)
    k, n_cols = m.shape
    cols: list[int] = []
    r = 0
    for c in range(n_cols):
        pivot = _first_nonzero(m[:, c], r)
        if pivot is None:
            continue
        if pivot != r:
            m[[r, pivot]] = m[[pivot, r]]
        _eliminate_below(m, r, c, q)
        cols.append(c)
        r += 1
        if r == k:
            return cols
    raise ValueError(f"matrix rank {r} is below its row count {k}; no information set exists")


class LUFactorization:
    """Compact PA = LU of an invertible matrix over F_q, reusable across right-hand sides.

    L is unit lower triangular and stored below the diagonal of U in a single
    array; the row permutation comes from first-nonzero pivoting.
    """

    def __init__(self, rows, q: int):
        a = as_matrix(rows, q)
        n, n_cols = a.shape
        if n != n_cols:
            raise ValueError(f"LU factorization needs a square matrix, got {a.shape}")
        perm = list(range(n))
        for k in range(n):
            pivot = _first_nonzero(a[:, k], k)
            if pivot is None:
                raise SingularMatrixError(rank(rows, q), n)
            if pivot != k:
                a[[k, pivot]] = a[[pivot, k]]
                perm[k], perm[pivot] = perm[pivot], perm[k]
            inv = pow(int(a[k, k]), -1, q)
            factors = a[k + 1:, k] * inv % q
            a[k + 1:, k] = factors
            a[k + 1:, k + 1:] = (a[k + 1:, k + 1:] - factors[:, None] * a[k, k + 1:]) % q
        self.q = q
        self.size = n
        self._lu = a
        self._perm = perm
        self._diag_inv = [pow(int(a[i, i]), -1, q) for i in range(n)]

    def solve_blocks(self, blocks) -> list[np.ndarray]:
        """Solve V x = b where b is a block vector; returns the block vector x."""
        n, q = self.size, self.q
        if len(blocks) != n:
            raise ValueError(f"expected {n} blocks, got {len(blocks)}")
        arrs = [np.asarray(b, dtype=np.int64) % q for b in blocks]
        shape = arrs[0].shape
        if any(a.shape != shape for a in arrs):
            raise ValueError("all blocks must share one shape")
        y = [arrs[p] for p in self._perm]
        lu = self._lu
        for i in range(n):
            for j in range(i):
                f = int(lu[i, j])
                if f:
                    y[i] = (y[i] - f * y[j]) % q
        for i in reversed(range(n)):
            for j in range(i + 1, n):
                f = int(lu[i, j])
                if f:
                    y[i] = (y[i] - f * y[j]) % q
            y[i] = y[i] * self._diag_inv[i] % q
        return y


def solve(rows, blocks, q: int) -> list[np.ndarray]:
    """One-shot solve of V x = b for a block vector b."""
    return LUFactorization(rows, q).solve_blocks(blocks)


def all_square_submatrices_invertible(rows, q: int, cap: int = SUBMATRIX_CHECK_CAP) -> bool:
    """Exhaustively check that every X x X column submatrix of an X x N matrix is invertible."""
    m = as_matrix(rows, q)
    x, n_cols = m.shape
    if x > n_cols:
        raise ValueError(f"row count {x} exceeds column count {n_cols}")
    total = math.comb(n_cols, x)
    if total > cap:
        raise ValueError(
            f"{total} submatrices to check exceeds the cap {cap}; "
            "raise the cap explicitly if this is intended"
        )
    for cols in combinations(range(n_cols), x):
        if rank(m[:, cols], q) < x:
            return False
    return True
