"""Exact decision procedures for torus representations.

A torus of rank k acting on C^n is given by its k x n integer weight matrix;
column i is the weight of coordinate i.  Supports are sets of 0-based column
indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, gcd
from typing import Sequence

from .algebra.linalg import rank_rational
from .errors import ResourceLimitError
from .lp import feasible

__all__ = [
    "StabilityResult",
    "StratumTable",
    "LargenessReport",
    "weight_columns",
    "stability_check",
    "stable_support",
    "fpig_check",
    "stratum_table",
    "largeness_verdict",
    "lattice_index",
]

Weights = Sequence[Sequence[int]]


def weight_columns(w: Weights) -> list[tuple[int, ...]]:
    if not w or not w[0]:
        raise ValueError("weight matrix needs k >= 1 and n >= 1")
    n = len(w[0])
    if any(len(r) != n for r in w):
        raise ValueError("ragged weight matrix")
    return [tuple(int(r[i]) for r in w) for i in range(n)]


def _rank(cols: Sequence[tuple[int, ...]]) -> int:
    return rank_rational(cols) if cols else 0


def _dot(a, b) -> Fraction:
    return sum((Fraction(x) * y for x, y in zip(a, b)), Fraction(0))


@dataclass(frozen=True)
class StabilityResult:
    """Outcome of the convex-hull test.

    ``coefficients`` (when stable) satisfy ``lambda_i >= 1`` and
    ``sum lambda_i alpha_i = 0``; ``functional`` (when not) pairs
    non-negatively with every weight and positively with at least one.
    """

    stable: bool
    coefficients: tuple[Fraction, ...] | None = None
    functional: tuple[Fraction, ...] | None = None

    def __bool__(self) -> bool:
        return self.stable


def stability_check(w: Weights) -> StabilityResult:
    """Is 0 in the relative interior of the convex hull of the weights?"""
    cols = weight_columns(w)
    k, n = len(cols[0]), len(cols)
    eq = [([cols[i][a] for i in range(n)], 0) for a in range(k)]
    ge = [([int(i == j) for j in range(n)], 1) for i in range(n)]
    lam = feasible(n, eq=eq, ge=ge)
    if lam is not None:
        return StabilityResult(True, coefficients=tuple(lam))
    # Farkas alternative: <l, alpha_i> >= 0 for all i, sum_i <l, alpha_i> = 1.
    total = [sum(c[a] for c in cols) for a in range(k)]
    ell = feasible(k, eq=[(total, 1)], ge=[(list(c), 0) for c in cols])
    if ell is None:  # pragma: no cover - excluded by Farkas' lemma
        raise AssertionError("neither a barycentric certificate nor a separating functional")
    return StabilityResult(False, functional=tuple(ell))


def _can_be_positive(cols, current: Sequence[int], i: int) -> bool:
    k = len(cols[0])
    ge = [(list(cols[j]), 0) for j in current if j != i]
    ge.append((list(cols[i]), 1))
    return feasible(k, ge=ge) is not None


def stable_support(w: Weights, s: Sequence[int] | None = None) -> frozenset[int]:
    """Support of the closed orbit in the closure of a generic orbit with support ``s``.

    Repeatedly removes every index whose weight some one-parameter subgroup can
    make strictly positive while keeping all others non-negative.
    """
    cols = weight_columns(w)
    current = sorted(set(range(len(cols)) if s is None else s))
    if any(i < 0 or i >= len(cols) for i in current):
        raise ValueError("support index out of range")
    while current:
        drop = {i for i in current if _can_be_positive(cols, current, i)}
        if not drop:
            break
        current = [i for i in current if i not in drop]
    return frozenset(current)


def fpig_check(w: Weights) -> bool:
    """Finite principal isotropy: the generic closed orbit's weights span Q^k."""
    cols = weight_columns(w)
    star = stable_support(w)
    return _rank([cols[i] for i in sorted(star)]) == len(cols[0])


def lattice_index(w: Weights) -> int:
    """gcd of the maximal minors: index of the weight lattice (0 if rank < k)."""
    cols = weight_columns(w)
    k = len(cols[0])
    g = 0
    for sub in combinations(cols, k):
        g = gcd(g, int(_int_det([list(c) for c in sub])))
    return abs(g)


def _int_det(m: list[list[int]]) -> Fraction:
    m = [[Fraction(x) for x in row] for row in m]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return det


@dataclass(frozen=True)
class StratumTable:
    """``dims[j]`` is dim V_(j) (None if empty) and ``c[j] = dims[j] - k + j``."""

    k: int
    n: int
    dims: tuple[int | None, ...]
    witnesses: tuple[frozenset | None, ...]

    @property
    def c(self) -> tuple[int | None, ...]:
        return tuple(None if d is None else d - self.k + j for j, d in enumerate(self.dims))

    def nonempty(self) -> list[int]:
        return [j for j, d in enumerate(self.dims) if d is not None]


def stratum_table(w: Weights, max_subsets: int = 1 << 20, max_n: int = 20) -> StratumTable:
    """Dimensions of the isotropy strata V_(j).

    A generic point with support S has isotropy of dimension k - rank(S), so
    dim V_(j) is the largest support of rank k - j.  The largest support of a
    given rank r is a flat, i.e. the closure of an independent r-set, so only
    independent sets of size <= k are enumerated.
    """
    cols = weight_columns(w)
    k, n = len(cols[0]), len(cols)
    if n > max_n:
        raise ResourceLimitError(f"n = {n} exceeds the enumeration bound {max_n}")
    r_max = _rank(cols)
    budget = sum(comb(n, r) for r in range(r_max + 1))
    if budget > max_subsets:
        raise ResourceLimitError(f"{budget} candidate supports exceed the cap {max_subsets}")
    dims: list[int | None] = [None] * (k + 1)
    wit: list[frozenset | None] = [None] * (k + 1)
    for r in range(r_max + 1):
        best, best_set = -1, None
        for T in combinations(range(n), r):
            tcols = [cols[i] for i in T]
            if _rank(tcols) != r:
                continue
            flat = frozenset(i for i in range(n) if i in T or _rank(tcols + [cols[i]]) == r)
            if len(flat) > best:
                best, best_set = len(flat), flat
        dims[k - r] = best
        wit[k - r] = best_set
    return StratumTable(k, n, tuple(dims), tuple(wit))


@dataclass(frozen=True)
class LargenessReport:
    """Verdicts for a torus representation plus witnesses for failures.

    ``max_modular`` is the largest m >= 0 for which V is m-modular, or None
    when V is not even 0-modular.
    """

    locally_free: bool
    stable: bool
    fpig: bool
    max_modular: int | None
    one_large: bool
    rank: int
    k: int
    lattice_index: int
    strata: StratumTable
    stability: StabilityResult
    stable_support: frozenset
    witnesses: dict = field(default_factory=dict)
    notes: tuple[str, ...] = ()

    @property
    def faithful_rank(self) -> bool:
        return self.rank == self.k

    def to_dict(self) -> dict:
        def q(x):
            return [str(v) for v in x] if x is not None else None

        return {
            "locally_free": self.locally_free,
            "stable": self.stable,
            "fpig": self.fpig,
            "max_modular": self.max_modular,
            "one_large": self.one_large,
            "rank": self.rank,
            "k": self.k,
            "lattice_index": self.lattice_index,
            "strata": {
                "dims": list(self.strata.dims),
                "c": list(self.strata.c),
            },
            "stable_support": sorted(self.stable_support),
            "stability_certificate": {
                "coefficients": q(self.stability.coefficients),
                "functional": q(self.stability.functional),
            },
            "witnesses": self.witnesses,
            "notes": list(self.notes),
        }


def largeness_verdict(w: Weights, max_subsets: int = 1 << 20, max_n: int = 20) -> LargenessReport:
    cols = weight_columns(w)
    k = len(cols[0])
    table = stratum_table(w, max_subsets=max_subsets, max_n=max_n)
    rank = _rank(cols)
    stab = stability_check(w)
    star = stable_support(w)
    fpig = _rank([cols[i] for i in sorted(star)]) == k
    locally_free = table.dims[0] is not None
    notes = []
    witnesses: dict = {}
    if rank < k:
        notes.append(f"weights span rank {rank} < k = {k}: action not faithful, not locally free")
    index = lattice_index(w) if rank == k else 0
    if index > 1:
        notes.append(f"finite kernel: weight lattice has index {index}")

    max_modular = None
    if locally_free:
        c = table.c
        gaps = [(c[0] - c[j], j) for j in table.nonempty() if j >= 1]
        m, j_worst = min(gaps)
        if m >= 0:
            max_modular = m
        witnesses["modularity"] = {
            "binding_stratum": j_worst,
            "support": sorted(table.witnesses[j_worst]),
        }
    else:
        witnesses["locally_free"] = {"rank": rank}
    if not stab.stable:
        witnesses["stable"] = {"functional": [str(x) for x in stab.functional]}
    if not fpig:
        witnesses["fpig"] = {"stable_support": sorted(star)}
    one_large = fpig and max_modular is not None and max_modular >= 1
    return LargenessReport(
        locally_free=locally_free,
        stable=stab.stable,
        fpig=fpig,
        max_modular=max_modular,
        one_large=one_large,
        rank=rank,
        k=k,
        lattice_index=index,
        strata=table,
        stability=stab,
        stable_support=star,
        witnesses=witnesses,
        notes=tuple(notes),
    )
