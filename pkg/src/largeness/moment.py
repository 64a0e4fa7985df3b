"""Complex moment quadrics on V + V*, the Jacobian matrix of linear forms, and
the real moment map of the compact form.

Variables of the ring O(V + V*) are ordered ``x_1..x_n, y_1..y_n``; the
quadric attached to ``A_a`` is ``mu_a = sum_ij y_i (A_a)_ij x_j``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np

from .algebra import Ideal, Poly, rank_rational
from .errors import ResourceLimitError
from .repspec import LieAction

__all__ = [
    "MomentIdeal",
    "JacobianMatrix",
    "MU_RHO_SCALE",
    "moment_components",
    "jacobian_matrix",
    "generic_rank",
    "real_moment",
    "complex_real_consistency",
    "complex_moment_values",
]

# mu evaluated at (v, conj v) on a compact basis element B equals
# MU_RHO_SCALE * rho_B(v): <B v, v> = 2i rho_B(v) when rho = (-i/2)<B v, v>.
MU_RHO_SCALE = 2j

# Imaginary parts of rho above this (relative to |v|^2 |B|) signal a basis bug.
HERMITICITY_RTOL = 1e-12


def _names(n: int) -> list[str]:
    return [f"x{i + 1}" for i in range(n)] + [f"y{i + 1}" for i in range(n)]


@dataclass(frozen=True)
class MomentIdeal:
    """The k bilinear quadrics ``mu_a`` over Q in 2n variables."""

    n: int
    k: int
    quadrics: tuple[Poly, ...]

    @property
    def nvars(self) -> int:
        return 2 * self.n

    @property
    def names(self) -> list[str]:
        return _names(self.n)

    def ideal(self, p: int) -> Ideal:
        """The ideal J over F_p."""
        return Ideal.of((q.to_modulus(p) for q in self.quadrics), self.nvars, p)

    def __str__(self) -> str:
        return ", ".join(q.to_str(self.names) for q in self.quadrics)


@dataclass(frozen=True)
class JacobianMatrix:
    """n x k matrix whose column a holds the linear forms ``A_a x``."""

    n: int
    k: int
    entries: tuple[tuple[Poly, ...], ...]  # entries[i][a], rational, n variables

    def column(self, a: int) -> list[Poly]:
        return [self.entries[i][a] for i in range(self.n)]

    def evaluate(self, point) -> list[list[Fraction]]:
        return [[e.evaluate(point) for e in row] for row in self.entries]

    def minor_count(self, t: int) -> int:
        return comb(self.n, t) * comb(self.k, t)

    def minors(self, t: int, p: int, max_minors: int = 5000) -> list[Poly]:
        """All nonzero t x t minors over F_p."""
        if self.minor_count(t) > max_minors:
            raise ResourceLimitError(
                f"{self.minor_count(t)} minors of size {t} exceed the cap {max_minors}"
            )
        ent = [[e.to_modulus(p) for e in row] for row in self.entries]
        cache: dict[tuple, Poly] = {}

        def det(rows: tuple, cols: tuple) -> Poly:
            if len(rows) == 1:
                return ent[rows[0]][cols[0]]
            hit = cache.get((rows, cols))
            if hit is not None:
                return hit
            r0, rest = rows[0], rows[1:]
            acc = Poly.zero(self.n, p)
            for idx, c in enumerate(cols):
                e = ent[r0][c]
                if e.is_zero():
                    continue
                sub = det(rest, cols[:idx] + cols[idx + 1:])
                if sub.is_zero():
                    continue
                term = e * sub
                acc = acc - term if idx % 2 else acc + term
            cache[(rows, cols)] = acc
            return acc

        out = []
        for rows in combinations(range(self.n), t):
            for cols in combinations(range(self.k), t):
                d = det(rows, cols)
                if d:
                    out.append(d)
        return out

    def to_str(self) -> list[list[str]]:
        names = [f"x{i + 1}" for i in range(self.n)]
        return [[e.to_str(names) for e in row] for row in self.entries]


def moment_components(action: LieAction) -> MomentIdeal:
    """``mu_a = sum_ij y_i (A_a)_ij x_j`` for each basis matrix."""
    n, k = action.dim_v, action.dim_g
    quadrics = []
    for A in action.basis:
        terms = {}
        for i in range(n):
            for j in range(n):
                c = A[i][j]
                if c:
                    mono = [0] * (2 * n)
                    mono[j] += 1
                    mono[n + i] += 1
                    terms[tuple(mono)] = c
        quadrics.append(Poly(terms, 2 * n, 0))
    return MomentIdeal(n, k, tuple(quadrics))


def jacobian_matrix(action: LieAction) -> JacobianMatrix:
    n, k = action.dim_v, action.dim_g
    rows = []
    for i in range(n):
        row = []
        for A in action.basis:
            terms = {}
            for j in range(n):
                if A[i][j]:
                    mono = [0] * n
                    mono[j] = 1
                    terms[tuple(mono)] = A[i][j]
            row.append(Poly(terms, n, 0))
        rows.append(tuple(row))
    return JacobianMatrix(n, k, tuple(rows))


def generic_rank(jac: JacobianMatrix, seed: int = 0, samples: int = 3, bound: int = 10_000) -> int:
    """Rank at random integer points (majority vote, ties to the larger rank)."""
    rng = np.random.default_rng(seed)
    ranks = []
    for _ in range(samples):
        point = [int(x) for x in rng.integers(-bound, bound + 1, size=jac.n)]
        ranks.append(rank_rational(jac.evaluate(point)))
    counts = Counter(ranks)
    return max(counts, key=lambda r: (counts[r], r))


def _as_vector(action: LieAction, v) -> np.ndarray:
    w = np.asarray(v, dtype=complex).ravel()
    if w.shape[0] != action.dim_v:
        raise ValueError(f"vector has length {w.shape[0]}, expected {action.dim_v}")
    return w


def real_moment(action: LieAction, v, *, compact: np.ndarray | None = None) -> np.ndarray:
    """``rho_a(v) = (-i/2) <B_a v, v>`` with v in orthonormal coordinates."""
    w = _as_vector(action, v)
    B = action.compact_basis if compact is None else compact
    raw = -0.5j * np.einsum("i,aij,j->a", w.conj(), B, w)
    scale = float(np.vdot(w, w).real) * max(1.0, float(np.abs(B).max(initial=0.0)))
    if np.any(np.abs(raw.imag) > HERMITICITY_RTOL * max(scale, 1e-300)):
        raise ValueError("real moment map has an imaginary part; compact basis is not skew-hermitian")
    return raw.real.copy()


def complex_moment_values(action: LieAction, v, mi: MomentIdeal | None = None) -> np.ndarray:
    """Symbolic quadrics ``mu_a`` evaluated at ``(x, y) = (v, covector of v)``.

    ``v`` is in orthonormal coordinates; in the symbolic coordinates the point
    is ``x = S v`` and the covector ``<., v>`` is ``y = S^-1 conj(v)``.
    """
    w = _as_vector(action, v)
    mi = mi or moment_components(action)
    s = action.frame
    point = list(s * w) + list(np.conj(w) / s)
    return np.array([complex(q.evaluate(point)) for q in mi.quadrics])


def complex_real_consistency(action: LieAction, v, mi: MomentIdeal | None = None) -> float:
    """Max deviation between ``mu`` on the compact basis and ``MU_RHO_SCALE * rho``."""
    mu = complex_moment_values(action, v, mi)
    mu_compact = action.compact_coeffs @ mu
    rho = real_moment(action, v)
    return float(np.max(np.abs(mu_compact - MU_RHO_SCALE * rho), initial=0.0))
