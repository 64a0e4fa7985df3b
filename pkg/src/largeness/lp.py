"""Exact feasibility of small linear systems over Q.

Phase-I simplex on Fractions with Bland's rule, so it cannot cycle and never
touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

__all__ = ["nonneg_solution", "feasible"]

Row = Sequence


def nonneg_solution(A: Sequence[Row], b: Sequence) -> list[Fraction] | None:
    """A point ``x >= 0`` with ``A x = b``, or None if there is none."""
    m = len(A)
    n = len(A[0]) if m else 0
    if m == 0:
        return [Fraction(0)] * n
    rows = []
    rhs = []
    for row, bi in zip(A, b):
        row = [Fraction(x) for x in row]
        bi = Fraction(bi)
        if bi < 0:
            row = [-x for x in row]
            bi = -bi
        rows.append(row)
        rhs.append(bi)
    # Columns 0..n-1 are x, n..n+m-1 the artificials.
    T = [row + [Fraction(int(i == j)) for j in range(m)] for i, row in enumerate(rows)]
    basis = [n + i for i in range(m)]
    width = n + m
    cost = [-sum(T[i][j] for i in range(m)) for j in range(n)] + [Fraction(0)] * m
    value = -sum(rhs)

    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = rhs[i] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:  # unbounded direction; cannot happen in phase I
            break
        r = best[1]
        piv = T[r][enter]
        T[r] = [x / piv for x in T[r]]
        rhs[r] /= piv
        for i in range(m):
            if i != r and T[i][enter]:
                f = T[i][enter]
                T[i] = [x - f * y for x, y in zip(T[i], T[r])]
                rhs[i] -= f * rhs[r]
        f = cost[enter]
        cost = [x - f * y for x, y in zip(cost, T[r])]
        value -= f * rhs[r]
        basis[r] = enter

    if value != 0:
        return None
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = rhs[i]
    return x


def feasible(
    nvars: int,
    eq: Sequence[tuple[Row, object]] = (),
    ge: Sequence[tuple[Row, object]] = (),
) -> list[Fraction] | None:
    """A point ``z`` in Q^nvars (free variables) with ``row.z == rhs`` for each
    ``eq`` entry and ``row.z >= rhs`` for each ``ge`` entry, or None."""
    n_ge = len(ge)
    width = 2 * nvars + n_ge
    A, b = [], []
    for row, rhs in eq:
        row = [Fraction(x) for x in row]
        A.append(row + [-x for x in row] + [Fraction(0)] * n_ge)
        b.append(rhs)
    for s, (row, rhs) in enumerate(ge):
        row = [Fraction(x) for x in row]
        slack = [Fraction(0)] * n_ge
        slack[s] = Fraction(-1)
        A.append(row + [-x for x in row] + slack)
        b.append(rhs)
    if not A:
        return [Fraction(0)] * nvars
    sol = nonneg_solution(A, b)
    if sol is None:
        return None
    assert len(sol) == width
    z = [sol[i] - sol[nvars + i] for i in range(nvars)]
    return z
