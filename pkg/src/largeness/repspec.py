"""Representation descriptions and their Lie-algebra matrix realizations.

A :class:`LieAction` carries a rational basis ``A_1..A_k`` of the acting Lie
algebra (in the coordinates of V used by all symbolic code) together with the
data for the compact real form used by the numeric code:

* ``frame`` -- positive reals ``s_i``; orthonormal coordinates ``w`` relate to
  the symbolic ones by ``v = diag(s) w``.  The hermitian form is the standard
  one in ``w``.
* ``compact_coeffs`` -- complex k x k matrix ``beta`` with
  ``B_a = sum_b beta[a, b] A_b``; in ``w`` coordinates every ``B_a`` is
  skew-hermitian.

Conventions (fixed, so numeric output is reproducible):

* torus: ``B_a = i A_a``;
* sl2 with basis ``(e, f, h)``: ``B = (i h, e - f, i (e + f))``; on ``R_j`` the
  frame is ``s_m = sqrt(binom(j, m))`` for the monomial ``x^(j-m) y^m``;
* classical families: ``i X`` for hermitian basis elements, ``X`` for
  skew-hermitian ones, otherwise ``X - X^H`` and ``i (X + X^H)``; hermitian
  ones are taken first, then a greedy R-independent selection.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, sqrt
from typing import Sequence

import numpy as np

from .algebra.linalg import rank_rational
from .errors import SpecError

__all__ = [
    "RepSpec",
    "LieAction",
    "build_torus",
    "build_sl2",
    "build_classical",
    "direct_sum",
    "change_basis",
    "realize",
    "bracket_closure_defect",
    "CLASSICAL_FAMILIES",
]

CLASSICAL_FAMILIES = ("gl", "sl", "so", "sp")

Matrix = tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class RepSpec:
    """Declarative description of a representation.

    ``group`` is ``"torus"``, ``"sl2"`` or one of :data:`CLASSICAL_FAMILIES`.
    """

    group: str
    weights: tuple[tuple[int, ...], ...] | None = None
    degrees: tuple[int, ...] | None = None
    n: int | None = None
    p: int = 0
    q: int = 0

    def __post_init__(self):
        if self.group == "torus":
            if not self.weights or not self.weights[0]:
                raise SpecError("torus needs a non-empty weight matrix", ("rep", "weights"))
            if len({len(r) for r in self.weights}) != 1:
                raise SpecError("weight matrix rows differ in length", ("rep", "weights"))
        elif self.group == "sl2":
            if not self.degrees:
                raise SpecError("sl2 needs at least one binary form degree", ("rep", "binary_forms"))
            if any(d < 0 for d in self.degrees):
                raise SpecError("binary form degrees must be non-negative", ("rep", "binary_forms"))
        elif self.group in CLASSICAL_FAMILIES:
            if self.n is None or self.n < 1:
                raise SpecError("n must be >= 1", ("group", "n"))
            if self.p < 0 or self.q < 0:
                raise SpecError("multiplicities must be non-negative", ("rep",))
            if self.group in ("so", "sp") and self.q:
                raise SpecError(f"{self.group} modules are self-dual; use q = 0", ("rep", "q"))
            if self.group in ("sl", "so") and self.n < 2:
                raise SpecError(f"{self.group}({self.n}) is the zero Lie algebra", ("group", "n"))
        else:
            raise SpecError(f"unsupported group {self.group!r}", ("group", "type"))

    @property
    def rank(self) -> int | None:
        return len(self.weights) if self.weights else None

    @property
    def has_trivial_summand(self) -> bool:
        """True when V contains a nonzero G-fixed vector visible from the data."""
        if self.group == "torus":
            cols = zip(*self.weights)
            return any(all(w == 0 for w in col) for col in cols)
        if self.group == "sl2":
            return 0 in self.degrees
        return False

    def describe(self) -> str:
        if self.group == "torus":
            return f"torus rank {self.rank}, weights {[list(r) for r in self.weights]}"
        if self.group == "sl2":
            return "sl2 on " + " + ".join(f"R{d}" for d in sorted(self.degrees))
        dual = f" + {self.q} dual" if self.q else ""
        return f"{self.group}({self.n}) on {self.p} standard{dual}"


@dataclass(frozen=True, eq=False)
class LieAction:
    """Basis of a Lie algebra acting on V, as rational n x n matrices."""

    basis: tuple[Matrix, ...]
    compact_coeffs: np.ndarray = field(repr=False)
    frame: np.ndarray = field(repr=False)
    label: str = ""
    trivial_summand: bool = False

    @property
    def dim_v(self) -> int:
        return len(self.basis[0]) if self.basis else 0

    @property
    def dim_g(self) -> int:
        return len(self.basis)

    def basis_array(self) -> np.ndarray:
        """Float copy of the rational basis, shape (k, n, n)."""
        return np.array([[[float(x) for x in row] for row in A] for A in self.basis])

    @property
    def compact_basis(self) -> np.ndarray:
        """Skew-hermitian basis of the compact form in orthonormal coordinates."""
        A = self.basis_array().astype(complex)
        B = np.einsum("ab,bij->aij", self.compact_coeffs, A)
        s = self.frame
        return B * s[None, None, :] / s[None, :, None]

    def __eq__(self, other) -> bool:
        if not isinstance(other, LieAction):
            return NotImplemented
        return (
            self.basis == other.basis
            and np.allclose(self.compact_coeffs, other.compact_coeffs)
            and np.allclose(self.frame, other.frame)
        )

    __hash__ = None


# -- helpers -----------------------------------------------------------------

def _zeros(n: int) -> list[list[Fraction]]:
    return [[Fraction(0)] * n for _ in range(n)]


def _freeze(m: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(Fraction(x) for x in row) for row in m)


def _block_diag(blocks: Sequence[Matrix]) -> Matrix:
    n = sum(len(b) for b in blocks)
    out = _zeros(n)
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[off + i][off + j] = x
        off += len(b)
    return _freeze(out)


def _neg_transpose(m: Matrix) -> Matrix:
    n = len(m)
    return tuple(tuple(-m[j][i] for j in range(n)) for i in range(n))


def _unit(n: int, i: int, j: int, c=1) -> list[list[Fraction]]:
    m = _zeros(n)
    m[i][j] = Fraction(c)
    return m


def _add(a, b, cb=1) -> list[list[Fraction]]:
    return [[x + cb * y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _compact_coeffs_generic(basis: Sequence[Matrix]) -> np.ndarray:
    """Express a basis of the compact real form in terms of ``basis``.

    Requires span(basis) to be closed under conjugate transpose.
    """
    A = np.array([[[float(x) for x in row] for row in X] for X in basis], dtype=complex)
    k = len(A)
    herm, other = [], []
    for X in A:
        XH = X.conj().T
        if np.allclose(X, XH):
            herm.append(1j * X)
        elif np.allclose(X, -XH):
            other.append(X)
        else:
            other.extend([X - XH, 1j * (X + XH)])
    chosen: list[np.ndarray] = []
    real_rows: list[np.ndarray] = []
    for C in herm + other:
        vec = np.concatenate([C.real.ravel(), C.imag.ravel()])
        trial = np.array(real_rows + [vec])
        if np.linalg.matrix_rank(trial, tol=1e-9) == len(trial):
            chosen.append(C)
            real_rows.append(vec)
        if len(chosen) == k:
            break
    if len(chosen) != k:
        raise ValueError("Lie algebra span is not closed under conjugate transpose")
    M = A.reshape(k, -1).T
    beta = np.zeros((k, k), dtype=complex)
    for a, C in enumerate(chosen):
        coeffs, *_ = np.linalg.lstsq(M, C.ravel(), rcond=None)
        if not np.allclose(M @ coeffs, C.ravel(), atol=1e-12):
            raise ValueError("compact element is not in the span of the basis")
        beta[a] = np.round(coeffs.real, 12) + 1j * np.round(coeffs.imag, 12)
    return beta


# -- constructions -----------------------------------------------------------

def build_torus(weights: Sequence[Sequence[int]]) -> LieAction:
    """Diagonal action: ``A_a = diag(weights[a])``; compact basis ``i A_a``."""
    w = [tuple(int(x) for x in row) for row in weights]
    if not w or not w[0]:
        raise ValueError("need k >= 1 and n >= 1")
    n = len(w[0])
    if any(len(r) != n for r in w):
        raise ValueError("ragged weight matrix")
    basis = []
    for row in w:
        m = _zeros(n)
        for i, x in enumerate(row):
            m[i][i] = Fraction(x)
        basis.append(_freeze(m))
    trivial = any(all(r[i] == 0 for r in w) for i in range(n))
    return LieAction(
        tuple(basis),
        1j * np.eye(len(w)),
        np.ones(n),
        label=f"torus{[list(r) for r in w]}",
        trivial_summand=trivial,
    )


SL2_COMPACT = np.array([[0, 0, 1j], [1, -1, 0], [1j, 1j, 0]])


def _sl2_block(j: int) -> tuple[Matrix, Matrix, Matrix]:
    d = j + 1
    e, f, h = _zeros(d), _zeros(d), _zeros(d)
    for m in range(d):
        h[m][m] = Fraction(j - 2 * m)
        if m >= 1:
            e[m - 1][m] = Fraction(m)
        if m < j:
            f[m + 1][m] = Fraction(j - m)
    return _freeze(e), _freeze(f), _freeze(h)


def build_sl2(degrees: Sequence[int]) -> LieAction:
    """``(e, f, h)`` acting block-diagonally on ``R_{j_1} + R_{j_2} + ...``."""
    degrees = [int(j) for j in degrees]
    if not degrees:
        raise ValueError("need at least one binary form degree")
    if any(j < 0 for j in degrees):
        raise ValueError("binary form degrees must be non-negative")
    blocks = [_sl2_block(j) for j in degrees]
    basis = tuple(_block_diag([b[t] for b in blocks]) for t in range(3))
    frame = np.concatenate([[sqrt(comb(j, m)) for m in range(j + 1)] for j in degrees])
    label = "sl2:" + "+".join(f"R{j}" for j in degrees)
    return LieAction(basis, SL2_COMPACT.copy(), frame, label=label, trivial_summand=0 in degrees)


def _classical_basis(family: str, n: int) -> list[list[list[Fraction]]]:
    if family == "gl":
        return [_unit(n, i, j) for i in range(n) for j in range(n)]
    if family == "sl":
        off = [_unit(n, i, j) for i in range(n) for j in range(n) if i != j]
        diag = [_add(_unit(n, i, i), _unit(n, i + 1, i + 1), -1) for i in range(n - 1)]
        return off + diag
    if family == "so":
        return [_add(_unit(n, i, j), _unit(n, j, i), -1) for i in range(n) for j in range(i + 1, n)]
    if family == "sp":
        N = 2 * n
        upper = []
        lower = []
        for i in range(n):
            for j in range(i, n):
                if i == j:
                    upper.append(_unit(N, i, n + i))
                    lower.append(_unit(N, n + i, i))
                else:
                    upper.append(_add(_unit(N, i, n + j), _unit(N, j, n + i)))
                    lower.append(_add(_unit(N, n + i, j), _unit(N, n + j, i)))
        diag = [_add(_unit(N, i, j), _unit(N, n + j, n + i), -1) for i in range(n) for j in range(n)]
        return upper + lower + diag
    raise ValueError(f"unsupported family {family!r}")


def build_classical(family: str, n: int, p: int, q: int = 0) -> LieAction:
    """Classical Lie algebra acting on ``p`` standard and ``q`` dual copies.

    The standard module of ``sp`` is ``C^(2n)``.  Dual copies use ``-A^T``.
    """
    if family not in CLASSICAL_FAMILIES:
        raise ValueError(f"unsupported family {family!r}")
    if family in ("so", "sp") and q:
        raise ValueError(f"{family} is self-dual; q must be 0")
    if n < 1 or p < 0 or q < 0 or p + q == 0:
        raise ValueError("need n >= 1, p, q >= 0 and p + q >= 1")
    if family in ("sl", "so") and n < 2:
        raise ValueError(f"{family}({n}) is zero")
    std = [_freeze(X) for X in _classical_basis(family, n)]
    basis = tuple(_block_diag([X] * p + [_neg_transpose(X)] * q) for X in std)
    beta = _compact_coeffs_generic(std)
    dim = len(std[0]) * (p + q)
    dual = f"+{q}dual" if q else ""
    return LieAction(basis, beta, np.ones(dim), label=f"{family}({n}):{p}std{dual}")


def direct_sum(a: LieAction, b: LieAction) -> LieAction:
    """Same Lie algebra acting on ``V + V'`` block-diagonally."""
    if a.dim_g != b.dim_g or not np.allclose(a.compact_coeffs, b.compact_coeffs):
        raise ValueError("direct sum needs the same Lie algebra basis on both summands")
    basis = tuple(_block_diag([x, y]) for x, y in zip(a.basis, b.basis))
    return LieAction(
        basis,
        a.compact_coeffs.copy(),
        np.concatenate([a.frame, b.frame]),
        label=f"({a.label})+({b.label})",
        trivial_summand=a.trivial_summand or b.trivial_summand,
    )


def change_basis(action: LieAction, M: Sequence[Sequence]) -> LieAction:
    """New basis ``A'_a = sum_b M[a][b] A_b`` for an invertible rational M."""
    k = action.dim_g
    Mq = [[Fraction(x) for x in row] for row in M]
    if len(Mq) != k or rank_rational(Mq) != k:
        raise ValueError("change of basis must be invertible k x k")
    n = action.dim_v
    new = []
    for row in Mq:
        acc = _zeros(n)
        for c, A in zip(row, action.basis):
            if c:
                acc = _add(acc, A, c)
        new.append(_freeze(acc))
    Minv = np.linalg.inv(np.array([[float(x) for x in r] for r in Mq]))
    beta = action.compact_coeffs @ Minv
    return LieAction(tuple(new), beta, action.frame.copy(), action.label, action.trivial_summand)


def realize(spec: RepSpec) -> LieAction:
    if spec.group == "torus":
        return build_torus(spec.weights)
    if spec.group == "sl2":
        return build_sl2(spec.degrees)
    return build_classical(spec.group, spec.n, spec.p, spec.q)


def _commutator(a: Matrix, b: Matrix) -> list[list[Fraction]]:
    n = len(a)
    ab = [[sum(a[i][t] * b[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
    ba = [[sum(b[i][t] * a[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
    return _add(ab, ba, -1)


def bracket_closure_defect(action: LieAction) -> int:
    """How much the brackets ``[A_a, A_b]`` raise the rank of span{A_c}; 0 iff closed."""
    vec = [[x for row in A for x in row] for A in action.basis]
    base = rank_rational(vec)
    rows = list(vec)
    for a in range(action.dim_g):
        for b in range(a + 1, action.dim_g):
            rows.append([x for row in _commutator(action.basis[a], action.basis[b]) for x in row])
    return rank_rational(rows) - base
