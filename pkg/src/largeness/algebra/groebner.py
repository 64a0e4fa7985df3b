"""Buchberger's algorithm over F_p, normal forms, Krull dimension, saturation.

Internally a polynomial is a list of ``(key, mono, coeff)`` triples sorted by
decreasing order key.  Order keys are additive (see
:class:`~largeness.algebra.poly.MonomialOrder`), so multiplying a sorted list
by a monomial keeps it sorted and only shifts the keys.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Iterable, Sequence

from ..errors import ResourceLimitError, RingMismatchError
from .poly import DEGREVLEX, Ideal, MonomialOrder, Poly, _inverse

__all__ = [
    "GroebnerLimits",
    "groebner_basis",
    "normal_form",
    "krull_dimension",
    "saturate",
    "contains",
    "same_ideal",
    "hilbert_function",
]


@dataclass(frozen=True)
class GroebnerLimits:
    """Caps on the pair queue and the intermediate basis size."""

    max_pairs: int = 200_000
    max_basis: int = 5_000


DEFAULT_LIMITS = GroebnerLimits()


# -- internal term-list arithmetic -------------------------------------------

def _internal(poly: Poly, order: MonomialOrder) -> list:
    key = order.key
    return sorted(((key(m), m, c) for m, c in poly.terms.items()), reverse=True)


def _external(terms: list, nvars: int, p: int) -> Poly:
    return Poly._trusted({m: c for _, m, c in terms}, nvars, p)


def _make_monic(terms: list, p: int) -> list:
    lc = terms[0][2]
    if lc == 1:
        return terms
    inv = _inverse(lc, p)
    return [(k, m, c * inv % p) for k, m, c in terms]


def _shift(g: list, qk: int, q: tuple, c: int, p: int) -> list:
    """Return c * x^q * g."""
    return [(k + qk, tuple(a + b for a, b in zip(m, q)), c * v % p) for k, m, v in g]


def _sub_shifted(f: list, s: int, g: list, qk: int, q: tuple, c: int, p: int) -> list:
    """Return f[s:] - c * x^q * g as a fresh sorted list."""
    out = []
    append = out.append
    i, j = s, 0
    nf, ng = len(f), len(g)
    while i < nf and j < ng:
        fk = f[i][0]
        gk = g[j][0] + qk
        if fk > gk:
            append(f[i])
            i += 1
        elif fk < gk:
            _, gm, gc = g[j]
            append((gk, tuple(a + b for a, b in zip(gm, q)), (-c * gc) % p))
            j += 1
        else:
            v = (f[i][2] - c * g[j][2]) % p
            if v:
                append((fk, f[i][1], v))
            i += 1
            j += 1
    if i < nf:
        out.extend(f[i:])
    while j < ng:
        gk, gm, gc = g[j]
        append((gk + qk, tuple(a + b for a, b in zip(gm, q)), (-c * gc) % p))
        j += 1
    return out


def _divides(a: tuple, b: tuple) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a: tuple, b: tuple) -> tuple:
    return tuple(x if x > y else y for x, y in zip(a, b))


def _disjoint(a: tuple, b: tuple) -> bool:
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


def _reduce(f: list, reducers: Sequence[list], p: int, full: bool = True) -> list:
    """Remainder of ``f`` on division by monic ``reducers``."""
    result = []
    s = 0
    heads = [(g[0][1], g[0][0], sum(g[0][1]), g) for g in reducers]
    while s < len(f):
        k, m, c = f[s]
        dm = sum(m)
        for lm, lk, dl, g in heads:
            if dl <= dm and _divides(lm, m):
                q = tuple(a - b for a, b in zip(m, lm))
                f = _sub_shifted(f, s, g, k - lk, q, c, p)
                s = 0
                break
        else:
            if not full:
                return f[s:]
            result.append(f[s])
            s += 1
    return result


def _spoly(f: list, g: list, order: MonomialOrder, p: int) -> list:
    lf, lg = f[0][1], g[0][1]
    L = _lcm(lf, lg)
    qf = tuple(a - b for a, b in zip(L, lf))
    qg = tuple(a - b for a, b in zip(L, lg))
    key = order.key
    sf = _shift(f, key(qf), qf, 1, p)
    return _sub_shifted(sf, 0, g, key(qg), qg, 1, p)


# -- Buchberger ----------------------------------------------------------------

def _buchberger(polys: list[list], order: MonomialOrder, p: int, limits: GroebnerLimits) -> list[list]:
    key = order.key
    basis: list[list] = []  # every polynomial ever added, by index
    G: list[int] = []       # indices of the current (minimal) basis
    B: list[tuple] = []     # pairs (lcm_key, lcm, i, j)

    def lm(i):
        return basis[i][0][1]

    def update(h: int):
        nonlocal G, B
        lh = lm(h)
        C = list(G)
        D: list[int] = []
        # Gebauer-Moeller: drop (h, g) when another pending pair has a dividing lcm.
        lcms = {g: _lcm(lh, lm(g)) for g in C}
        while C:
            g1 = C.pop(0)
            l1 = lcms[g1]
            if _disjoint(lh, lm(g1)) or not any(
                _divides(lcms[g2], l1) for g2 in C + D
            ):
                D.append(g1)
        E = [g for g in D if not _disjoint(lh, lm(g))]
        B_new = []
        for pair in B:
            _, lij, i, j = pair
            if _divides(lh, lij) and _lcm(lm(i), lh) != lij and _lcm(lh, lm(j)) != lij:
                continue
            B_new.append(pair)
        for g in E:
            l = lcms[g]
            B_new.append((key(l), l, g, h))
        G = [g for g in G if not _divides(lh, lm(g))] + [h]
        B = B_new
        if len(B) > limits.max_pairs:
            raise ResourceLimitError(f"pair queue exceeded {limits.max_pairs}")
        if len(G) > limits.max_basis:
            raise ResourceLimitError(f"basis size exceeded {limits.max_basis}")

    # Seed with the interreduced-by-degree input; each is reduced by earlier ones.
    for f in sorted(polys, key=lambda t: t[0][0]):
        r = _reduce(f, [basis[g] for g in G], p)
        if r:
            basis.append(_make_monic(r, p))
            update(len(basis) - 1)

    while B:
        idx = min(range(len(B)), key=lambda t: (B[t][0], B[t][2], B[t][3]))
        _, _, i, j = B.pop(idx)
        s = _spoly(basis[i], basis[j], order, p)
        r = _reduce(s, [basis[g] for g in G], p)
        if r:
            basis.append(_make_monic(r, p))
            update(len(basis) - 1)

    minimal = [basis[g] for g in G]
    reduced = []
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        tail = _reduce(g[1:], others, p)
        reduced.append([g[0]] + tail)
    reduced.sort(key=lambda t: t[0][0])
    return reduced


def groebner_basis(
    ideal: Ideal, order: MonomialOrder = DEGREVLEX, limits: GroebnerLimits = DEFAULT_LIMITS
) -> Ideal:
    """Reduced Groebner basis of ``ideal`` for ``order`` (monic generators).

    The generators of the result are sorted by increasing leading monomial.
    """
    p = ideal.modulus
    if p == 0:
        raise ValueError("Groebner bases are computed over prime fields only; reduce mod p first")
    if ideal.order == order:
        return ideal
    polys = [_internal(g, order) for g in ideal.generators if g]
    reduced = _buchberger(polys, order, p, limits)
    gens = tuple(_external(t, ideal.nvars, p) for t in reduced)
    return Ideal(gens, ideal.nvars, p, order)


def normal_form(f: Poly, gb: Ideal) -> Poly:
    """Unique remainder of ``f`` modulo the Groebner basis ``gb``."""
    if gb.order is None:
        raise ValueError("normal_form needs a Groebner basis")
    if f.nvars != gb.nvars or f.modulus != gb.modulus:
        raise RingMismatchError("polynomial and basis live in different rings")
    reducers = [_internal(g, gb.order) for g in gb.generators]
    r = _reduce(_internal(f, gb.order), reducers, gb.modulus)
    return _external(r, f.nvars, f.modulus)


def contains(gb: Ideal, f: Poly) -> bool:
    return normal_form(f, gb).is_zero()


def same_ideal(a: Ideal, b: Ideal) -> bool:
    """Ideal equality by mutual containment (inputs must be Groebner bases)."""
    return all(contains(b, g) for g in a.generators) and all(contains(a, g) for g in b.generators)


# -- dimension -----------------------------------------------------------------

def _min_transversal(sets: list[int], nvars: int) -> int:
    """Smallest number of variables meeting every bitmask in ``sets``."""
    # Keep only inclusion-minimal supports.
    sets = sorted(set(sets), key=lambda s: bin(s).count("1"))
    minimal: list[int] = []
    for s in sets:
        if not any((m & s) == m for m in minimal):
            minimal.append(s)
    best = [nvars + 1]

    def search(remaining: list[int], used: int):
        if used >= best[0]:
            return
        if not remaining:
            best[0] = used
            return
        pick = min(remaining, key=lambda s: bin(s).count("1"))
        v = pick
        while v:
            bit = v & -v
            v ^= bit
            search([s for s in remaining if not s & bit], used + 1)

    search(minimal, 0)
    return best[0]


def krull_dimension(gb: Ideal) -> int:
    """Krull dimension of the quotient ring; -1 for the unit ideal.

    Computed as the largest set of variables containing the support of no
    leading monomial.
    """
    if gb.order is None:
        raise ValueError("krull_dimension needs a Groebner basis")
    supports = []
    for m in gb.leading_monomials():
        mask = 0
        for i, e in enumerate(m):
            if e:
                mask |= 1 << i
        if mask == 0:
            return -1
        supports.append(mask)
    if not supports:
        return gb.nvars
    return gb.nvars - _min_transversal(supports, gb.nvars)


def _monomials(nvars: int, degree: int) -> Iterable[tuple]:
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        yield tuple(e)


def hilbert_function(gb: Ideal, degree: int) -> int:
    """Number of standard monomials of the given degree (homogeneous ideals)."""
    lms = gb.leading_monomials()
    return sum(
        1 for m in _monomials(gb.nvars, degree) if not any(_divides(l, m) for l in lms)
    )


# -- saturation ----------------------------------------------------------------

def saturate(
    ideal: Ideal, f: Poly, limits: GroebnerLimits = DEFAULT_LIMITS
) -> Ideal:
    """``ideal : f^infinity`` as a reduced degrevlex Groebner basis.

    Adjoins a variable t in front, computes a basis of ``ideal + <t f - 1>``
    for the order eliminating t, and keeps the t-free elements.
    """
    if f.nvars != ideal.nvars or f.modulus != ideal.modulus:
        raise RingMismatchError("witness and ideal live in different rings")
    if f.is_zero():
        raise ValueError("cannot saturate by the zero polynomial")
    n, p = ideal.nvars, ideal.modulus
    t = Poly.variable(0, n + 1, p)
    gens = [g.embed(n + 1, 1) for g in ideal.generators if g]
    gens.append(t * f.embed(n + 1, 1) - 1)
    big = groebner_basis(Ideal.of(gens, n + 1, p), MonomialOrder("block", 1), limits)
    keep = [g.restrict(range(1, n + 1)) for g in big.generators if 0 not in g.support()]
    # The t-free part of a reduced block basis is the reduced basis of the
    # elimination ideal for degrevlex on the remaining block.
    keep.sort(key=lambda g: DEGREVLEX.key(g.leading_monomial()))
    return Ideal(tuple(keep), n, p, DEGREVLEX)
