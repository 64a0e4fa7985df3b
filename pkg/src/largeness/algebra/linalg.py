"""Dense linear algebra over F_p (numpy int64) and over Q (Fractions)."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

import numpy as np

__all__ = ["matrix_rank_modp", "rank_rational", "rref_rational", "nullspace_integer"]


def matrix_rank_modp(matrix, p: int = 32003) -> int:
    """Rank of an integer matrix over F_p by Gaussian elimination.

    Entries are reduced mod p first; p must be below 2**31 so that products
    fit in int64.
    """
    if p >= 1 << 31:
        raise ValueError("modulus too large for int64 elimination")
    a = np.array(matrix, dtype=np.int64, copy=True)
    if a.ndim != 2 or a.size == 0:
        return 0
    a %= p
    rows, cols = a.shape
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        nz = np.nonzero(a[rank:, c])[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, c]), -1, p)
        a[rank, c:] = a[rank, c:] * inv % p
        below = a[rank + 1:, c]
        mask = below != 0
        if mask.any():
            idx = np.nonzero(mask)[0] + rank + 1
            a[idx, c:] = (a[idx, c:] - np.outer(a[idx, c], a[rank, c:])) % p
        rank += 1
    return rank


def rref_rational(matrix: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q and the pivot columns."""
    a = [[Fraction(x) for x in row] for row in matrix]
    if not a:
        return [], []
    rows, cols = len(a), len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a[:r], pivots


def rank_rational(matrix: Sequence[Sequence]) -> int:
    """Exact rank over Q."""
    if not len(matrix) or not len(matrix[0]):
        return 0
    return len(rref_rational(matrix)[1])


def nullspace_integer(matrix: Sequence[Sequence], ncols: int | None = None) -> list[list[int]]:
    """Primitive integer basis of the right nullspace over Q."""
    if not len(matrix):
        n = ncols or 0
        return [[int(i == j) for j in range(n)] for i in range(n)]
    n = len(matrix[0])
    rref, pivots = rref_rational(matrix)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, pc in zip(rref, pivots):
            v[pc] = -row[f]
        den = lcm(*(x.denominator for x in v))
        ints = [int(x * den) for x in v]
        g = 0
        for x in ints:
            g = gcd(g, x)
        basis.append([x // g for x in ints])
    return basis
