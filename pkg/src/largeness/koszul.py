"""Symbolic certificates for the moment ideal.

* regular sequence / complete intersection via Groebner dimension;
* graded Koszul homology over F_p from ranks of boundary-map slices;
* the determinantal condition (F_d) on the Jacobian matrix;
* reducibility evidence via saturation by a witness polynomial.

Every exact number is computed over two primes and compared; a mismatch raises
:class:`~largeness.errors.PrimeDisagreementError`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement
from math import comb
from typing import Callable, Sequence

import numpy as np

from .algebra import (
    PRIMES,
    GroebnerLimits,
    Ideal,
    Poly,
    groebner_basis,
    hilbert_function,
    krull_dimension,
    matrix_rank_modp,
    nullspace_integer,
    same_ideal,
    saturate,
)
from .errors import PrimeDisagreementError, ResourceLimitError
from .moment import JacobianMatrix, MomentIdeal, generic_rank, jacobian_matrix, moment_components
from .repspec import LieAction

__all__ = [
    "KoszulLimits",
    "RegularSequenceResult",
    "FdReport",
    "ComponentEvidence",
    "KoszulCertificate",
    "ConsistencyReport",
    "KoszulComplex",
    "agree",
    "regular_sequence_check",
    "graded_koszul_homology",
    "homology_table",
    "euler_check",
    "euler_checks",
    "fd_report",
    "fd_condition_check",
    "component_analysis",
    "koszul_certificate",
    "one_large_consistency",
]


@dataclass(frozen=True)
class KoszulLimits:
    """Caps for the graded slices and the determinantal ideals."""

    max_slice: int = 250_000        # total basis size of one (Lambda^i (x) R)_d
    max_block_entries: int = 6_000_000
    max_minors: int = 5_000
    groebner: GroebnerLimits = GroebnerLimits()


DEFAULT_LIMITS = KoszulLimits()


def agree(fn: Callable[[int], object], primes: Sequence[int] = PRIMES, what: str = "result"):
    """Evaluate ``fn`` at every prime; return the common value or raise."""
    values = [fn(p) for p in primes]
    for p, v in zip(primes[1:], values[1:]):
        if v != values[0]:
            raise PrimeDisagreementError(
                f"{what}: {values[0]!r} over F_{primes[0]} but {v!r} over F_{p}"
            )
    return values[0]


# -- regular sequence ----------------------------------------------------------

@dataclass(frozen=True)
class RegularSequenceResult:
    regular: bool
    dimension: int
    expected: int

    def __bool__(self) -> bool:
        return self.regular


def _moment_gb(m: MomentIdeal, p: int, limits: GroebnerLimits) -> Ideal:
    return groebner_basis(m.ideal(p), limits=limits)


def regular_sequence_check(
    m: MomentIdeal, primes: Sequence[int] = PRIMES, limits: KoszulLimits = DEFAULT_LIMITS
) -> RegularSequenceResult:
    """The quadrics form a regular sequence iff dim R/J = 2n - k."""
    dim = agree(lambda p: krull_dimension(_moment_gb(m, p, limits.groebner)), primes, "dim R/J")
    expected = 2 * m.n - m.k
    return RegularSequenceResult(dim == expected, dim, expected)


# -- graded Koszul complex -----------------------------------------------------

def _grading(quadrics: Sequence[dict], nvars: int) -> np.ndarray:
    """Integer grading matrix making every quadric homogeneous."""
    if any(not q for q in quadrics):
        return np.ones((1, nvars), dtype=np.int64)
    rows = []
    for q in quadrics:
        monos = list(q)
        for m in monos[1:]:
            rows.append([a - b for a, b in zip(m, monos[0])])
    basis = nullspace_integer(rows, ncols=nvars) if rows else [
        [int(i == j) for j in range(nvars)] for i in range(nvars)
    ]
    return np.array(basis, dtype=np.int64).reshape(-1, nvars)


_SPARSE_CUTOFF = 250_000


def _sparse_rank(columns: list[dict[int, int]], p: int) -> int:
    """Rank mod p of a matrix given as sparse columns (row -> value)."""
    pivots: dict[int, dict[int, int]] = {}
    rank = 0
    for col in columns:
        v = dict(col)
        while v:
            r = min(v)
            piv = pivots.get(r)
            if piv is None:
                inv = pow(v[r], -1, p)
                pivots[r] = {i: x * inv % p for i, x in v.items()}
                rank += 1
                break
            c = v[r]
            for i, x in piv.items():
                y = (v.get(i, 0) - c * x) % p
                if y:
                    v[i] = y
                else:
                    v.pop(i, None)
    return rank


class KoszulComplex:
    """The Koszul complex of the quadrics over F_p, sliced by internal degree.

    The generator ``e_a`` has internal degree 2, so ``(Lambda^i (x) R)_d`` is
    spanned by ``e_I (x) m`` with ``|I| = i`` and ``deg m = d - 2i``.  Slices
    are further split by the finest grading for which every quadric is
    homogeneous; boundary maps preserve it, so ranks are computed block-wise.
    """

    def __init__(self, m: MomentIdeal, p: int, limits: KoszulLimits = DEFAULT_LIMITS):
        self.m = m
        self.p = p
        self.limits = limits
        self.k = m.k
        self.nvars = m.nvars
        self.quadrics = [dict(q.to_modulus(p).terms) for q in m.quadrics]
        self.W = _grading(self.quadrics, self.nvars)
        self.gen_weight = [
            tuple(int(x) for x in (self.W @ np.array(next(iter(q)))))
            if q else tuple(int(x) for x in 2 * self.W[:, 0])
            for q in self.quadrics
        ]
        self._monos: dict[int, list[tuple]] = {}
        self._rank: dict[tuple[int, int], int] = {}
        self._block_cache: dict[tuple[int, int], dict] = {}

    def _monomials(self, degree: int) -> list[tuple]:
        """Monomials of a degree, each paired with its multidegree."""
        if degree < 0:
            return []
        if degree not in self._monos:
            n = self.nvars
            monos = []
            for combo in combinations_with_replacement(range(n), degree):
                e = [0] * n
                for i in combo:
                    e[i] += 1
                monos.append(tuple(e))
            degs = (np.array(monos, dtype=np.int64).reshape(-1, n) @ self.W.T).tolist()
            self._monos[degree] = [(m, tuple(md)) for m, md in zip(monos, degs)]
        return self._monos[degree]

    def slice_dim(self, i: int, d: int) -> int:
        if i < 0 or i > self.k or d - 2 * i < 0:
            return 0
        e = d - 2 * i
        return comb(self.k, i) * comb(self.nvars + e - 1, e)

    def _blocks(self, i: int, d: int) -> dict[tuple, list[tuple]]:
        """Basis of the slice (i, d) grouped by multidegree."""
        if (i, d) in self._block_cache:
            return self._block_cache[(i, d)]
        if self.slice_dim(i, d) > self.limits.max_slice:
            raise ResourceLimitError(
                f"slice (i={i}, d={d}) has dimension {self.slice_dim(i, d)} > {self.limits.max_slice}"
            )
        blocks: dict[tuple, list[tuple]] = {}
        if self.slice_dim(i, d) == 0:
            return blocks
        monos = self._monomials(d - 2 * i)
        g = self.W.shape[0]
        for I in combinations(range(self.k), i):
            wI = [sum(self.gen_weight[a][t] for a in I) for t in range(g)]
            for mono, md in monos:
                key = tuple(x + y for x, y in zip(md, wI))
                blocks.setdefault(key, []).append((I, mono))
        self._block_cache[(i, d)] = blocks
        return blocks

    def boundary_rank(self, i: int, d: int) -> int:
        """Rank of ``(Lambda^i (x) R)_d -> (Lambda^(i-1) (x) R)_d``."""
        if i <= 0 or i > self.k:
            return 0
        if (i, d) in self._rank:
            return self._rank[(i, d)]
        src = self._blocks(i, d)
        dst = self._blocks(i - 1, d)
        total = 0
        p = self.p
        for key, cols in src.items():
            rows = dst.get(key)
            if not rows:
                continue
            if len(rows) * len(cols) > self.limits.max_block_entries:
                raise ResourceLimitError(
                    f"boundary block {len(rows)}x{len(cols)} at (i={i}, d={d}) is too large"
                )
            index = {b: r for r, b in enumerate(rows)}
            columns = []
            for I, mono in cols:
                col: dict[int, int] = {}
                for pos, a in enumerate(I):
                    rest = I[:pos] + I[pos + 1:]
                    sign = -1 if pos % 2 else 1
                    for qm, qc in self.quadrics[a].items():
                        r = index[(rest, tuple(x + y for x, y in zip(mono, qm)))]
                        col[r] = (col.get(r, 0) + sign * qc) % p
                columns.append({r: v for r, v in col.items() if v})
            if len(rows) * len(cols) <= _SPARSE_CUTOFF:
                total += _sparse_rank(columns, p)
            else:
                M = np.zeros((len(rows), len(cols)), dtype=np.int64)
                for c, col in enumerate(columns):
                    for r, v in col.items():
                        M[r, c] = v
                total += matrix_rank_modp(M, p)
        self._rank[(i, d)] = total
        return total

    def homology(self, i: int, d: int) -> int:
        """dim over F_p of H_i in internal degree d."""
        return self.slice_dim(i, d) - self.boundary_rank(i, d) - self.boundary_rank(i + 1, d)


def graded_koszul_homology(
    m: MomentIdeal, i: int, d: int, primes: Sequence[int] = PRIMES,
    limits: KoszulLimits = DEFAULT_LIMITS,
) -> int:
    if not 1 <= i <= m.k:
        raise ValueError(f"homological degree must lie in 1..{m.k}")
    if d < 0:
        raise ValueError("internal degree must be non-negative")
    return agree(lambda p: KoszulComplex(m, p, limits).homology(i, d), primes, f"H_{i} in degree {d}")


def homology_table(
    m: MomentIdeal, d_max: int | None = None, primes: Sequence[int] = PRIMES,
    limits: KoszulLimits = DEFAULT_LIMITS,
) -> list[tuple[int, int, int]]:
    """``(i, d, dim H_i,d)`` for ``1 <= i <= k`` and ``2i <= d <= d_max``.

    Entries with ``d < 2i`` vanish trivially and are omitted.
    """
    d_max = 2 * m.k + 4 if d_max is None else d_max

    def table(p):
        kc = KoszulComplex(m, p, limits)
        return [
            (i, d, kc.homology(i, d))
            for i in range(1, m.k + 1)
            for d in range(2 * i, d_max + 1)
        ]

    return agree(table, primes, "Koszul homology table")


def euler_check(
    m: MomentIdeal, d: int, p: int = PRIMES[0], limits: KoszulLimits = DEFAULT_LIMITS
) -> dict:
    """Alternating sums of slice and homology dimensions in degree d.

    H_0 is taken from the Hilbert function of R/J (standard monomials of the
    Groebner basis), independently of the boundary ranks.
    """
    return euler_checks(m, [d], p, limits)[0]


def euler_checks(
    m: MomentIdeal, degrees: Sequence[int], p: int = PRIMES[0], limits: KoszulLimits = DEFAULT_LIMITS
) -> list[dict]:
    """:func:`euler_check` for several degrees sharing one complex and one basis."""
    kc = KoszulComplex(m, p, limits)
    gb = _moment_gb(m, p, limits.groebner)
    out = []
    for d in degrees:
        chain = sum((-1) ** i * kc.slice_dim(i, d) for i in range(m.k + 1))
        h0 = hilbert_function(gb, d)
        higher = [kc.homology(i, d) for i in range(1, m.k + 1)]
        hom = h0 + sum((-1) ** i * h for i, h in enumerate(higher, start=1))
        h0_ranks = kc.homology(0, d)
        out.append({
            "degree": d,
            "chain": chain,
            "homology": hom,
            "h0_hilbert": h0,
            "h0_ranks": h0_ranks,
            "ok": chain == hom and h0 == h0_ranks,
        })
    return out


# -- determinantal condition ---------------------------------------------------

@dataclass(frozen=True)
class FdReport:
    """Codimensions of the minor ideals and the largest d with (F_d).

    ``max_d`` is None when the action is not locally free (generic rank < k).
    """

    locally_free: bool
    rank: int
    codims: tuple[int, ...]   # codims[t - 1] = codim I_t, t = 1..rank
    max_d: int | None

    def holds(self, d: int) -> bool:
        return self.max_d is not None and self.max_d >= d


def fd_report(
    jac: JacobianMatrix, primes: Sequence[int] = PRIMES, limits: KoszulLimits = DEFAULT_LIMITS,
    seed: int = 0,
) -> FdReport:
    rk = generic_rank(jac, seed=seed)
    codims = []
    for t in range(1, rk + 1):
        def codim(p, t=t):
            gens = jac.minors(t, p, limits.max_minors)
            gb = groebner_basis(Ideal.of(gens, jac.n, p), limits=limits.groebner)
            dim = krull_dimension(gb)
            return jac.n - dim
        codims.append(agree(codim, primes, f"codim I_{t}"))
    locally_free = rk == jac.k
    max_d = None
    if locally_free:
        max_d = min(c - (rk - t + 1) for t, c in enumerate(codims, start=1))
    return FdReport(locally_free, rk, tuple(codims), max_d)


def fd_condition_check(
    jac: JacobianMatrix, d: int, primes: Sequence[int] = PRIMES,
    limits: KoszulLimits = DEFAULT_LIMITS,
) -> bool:
    """(F_d) for a locally free action; False when the action is not locally free."""
    return fd_report(jac, primes, limits).holds(d)


# -- reducibility evidence -----------------------------------------------------

@dataclass(frozen=True)
class ComponentEvidence:
    """Saturation of J by a witness and what it shows.

    ``reducible`` certifies that Y has at least two irreducible components:
    J is a complete intersection (so it has no embedded primes), the
    saturation is strictly larger (some component lies in V(witness)) and
    proper with the same dimension (some component does not).
    """

    saturation: tuple[str, ...]
    dimension: int
    ideal_dimension: int
    strict: bool
    complete_intersection: bool

    @property
    def reducible(self) -> bool:
        return self.strict and self.complete_intersection and self.dimension == self.ideal_dimension

    def to_dict(self) -> dict:
        return {
            "saturation": list(self.saturation),
            "dimension": self.dimension,
            "ideal_dimension": self.ideal_dimension,
            "strict": self.strict,
            "reducible": self.reducible,
        }


def _lift_witness(m: MomentIdeal, witness: Poly) -> Poly:
    if witness.nvars == m.n:
        return witness.embed(m.nvars, 0)
    if witness.nvars == m.nvars:
        return witness
    raise ValueError(f"witness must use {m.n} or {m.nvars} variables")


def component_analysis(
    m: MomentIdeal, witness: Poly, primes: Sequence[int] = PRIMES,
    limits: KoszulLimits = DEFAULT_LIMITS,
) -> ComponentEvidence:
    """Saturate J by ``witness`` (a polynomial in the x's, or in all 2n variables)."""
    f = _lift_witness(m, witness)

    def run(p):
        J = _moment_gb(m, p, limits.groebner)
        S = saturate(J, f.to_modulus(p) if f.modulus == 0 else f, limits.groebner)
        dJ, dS = krull_dimension(J), krull_dimension(S)
        strict = not same_ideal(J, S)
        return dJ, dS, strict, tuple(g.to_str(m.names) for g in S.generators)

    runs = {p: run(p) for p in primes}
    dJ, dS, strict = agree(lambda p: runs[p][:3], primes, "saturation")
    gens = runs[primes[0]][3]
    return ComponentEvidence(gens, dS, dJ, strict, dJ == 2 * m.n - m.k)


# -- certificate and consistency ------------------------------------------------

@dataclass
class KoszulCertificate:
    dim_quotient: int
    expected: int
    is_complete_intersection: bool
    homology_table: list | None = None
    fd: FdReport | None = None
    component_evidence: ComponentEvidence | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def fd_level(self) -> int | None:
        return None if self.fd is None else self.fd.max_d

    def homology_vanishes(self) -> bool | None:
        if self.homology_table is None:
            return None
        return all(h == 0 for _, _, h in self.homology_table)

    def to_dict(self) -> dict:
        out = {
            "dim_quotient": self.dim_quotient,
            "expected": self.expected,
            "is_complete_intersection": self.is_complete_intersection,
            "homology_table": (
                [list(e) for e in self.homology_table] if self.homology_table is not None else None
            ),
            "fd": None,
            "component_evidence": (
                self.component_evidence.to_dict() if self.component_evidence else None
            ),
            "notes": list(self.notes),
        }
        if self.fd is not None:
            out["fd"] = {
                "locally_free": self.fd.locally_free,
                "generic_rank": self.fd.rank,
                "codims": list(self.fd.codims),
                "max_d": self.fd.max_d,
            }
        return out


def koszul_certificate(
    action: LieAction,
    d_max: int | None = None,
    witness: Poly | None = None,
    primes: Sequence[int] = PRIMES,
    limits: KoszulLimits = DEFAULT_LIMITS,
    with_fd: bool = True,
    seed: int = 0,
) -> KoszulCertificate:
    m = moment_components(action)
    reg = regular_sequence_check(m, primes, limits)
    cert = KoszulCertificate(reg.dimension, reg.expected, reg.regular)
    try:
        cert.homology_table = homology_table(m, d_max, primes, limits)
    except ResourceLimitError as exc:
        cert.notes.append(f"homology table not computed: {exc}")
    if with_fd:
        try:
            cert.fd = fd_report(jacobian_matrix(action), primes, limits, seed=seed)
        except ResourceLimitError as exc:
            cert.notes.append(f"(F_d) not computed: {exc}")
    if witness is not None:
        cert.component_evidence = component_analysis(m, witness, primes, limits)
    if cert.is_complete_intersection and cert.homology_vanishes() is False:
        cert.notes.append("INCONSISTENT: complete intersection with nonzero higher Koszul homology")
    return cert


@dataclass
class ConsistencyReport:
    verdict: bool
    regular: RegularSequenceResult
    fd: FdReport | None
    contradictions: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.contradictions

    def to_dict(self) -> dict:
        return {
            "verdict_one_large": self.verdict,
            "regular_sequence": self.regular.regular,
            "dimension": self.regular.dimension,
            "fd1": None if self.fd is None else self.fd.holds(1),
            "fd_max": None if self.fd is None else self.fd.max_d,
            "consistent": self.consistent,
            "contradictions": list(self.contradictions),
            "notes": list(self.notes),
        }


def one_large_consistency(
    action: LieAction,
    verdict: bool,
    semisimple: bool = False,
    primes: Sequence[int] = PRIMES,
    limits: KoszulLimits = DEFAULT_LIMITS,
    seed: int = 0,
) -> ConsistencyReport:
    """Check a 1-largeness verdict against the symbolic certificates.

    1-large forces a regular sequence and (F_1).  For semisimple groups
    local freeness gives FPIG, so a negative verdict must also show up as a
    failure of (F_1).
    """
    m = moment_components(action)
    reg = regular_sequence_check(m, primes, limits)
    report = ConsistencyReport(verdict, reg, None)
    try:
        report.fd = fd_report(jacobian_matrix(action), primes, limits, seed=seed)
    except ResourceLimitError as exc:
        report.notes.append(f"(F_1) not computed: {exc}")
    fd1 = None if report.fd is None else report.fd.holds(1)
    if verdict and not reg.regular:
        report.contradictions.append("verdict 1-large but the moment quadrics are not a regular sequence")
    if verdict and fd1 is False:
        report.contradictions.append("verdict 1-large but (F_1) fails")
    if not verdict and semisimple and fd1 is True:
        report.contradictions.append("verdict not 1-large for a semisimple group but (F_1) holds")
    if report.fd is not None and reg.regular != report.fd.holds(0):
        report.contradictions.append("regular sequence and (F_0) disagree")
    return report
