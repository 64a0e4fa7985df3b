"""Sparse multivariate polynomials over F_p or Q, monomial orders and ideals.

A polynomial is a map from exponent tuples to nonzero coefficients.  Over a
prime field the coefficients are ints in ``[0, p)``; over the rationals
(``modulus == 0``) they are :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from ..errors import ModulusError, RingMismatchError

__all__ = ["MonomialOrder", "Poly", "Ideal", "DEGREVLEX"]

# Exponent field width used by the packed order keys.
_BITS = 20


@dataclass(frozen=True)
class MonomialOrder:
    """Degree-reverse-lexicographic order, or a two-block elimination order.

    For ``kind == "block"`` the first ``n_elim`` variables form the eliminated
    block; monomials are compared by degrevlex on that block first and by
    degrevlex on the remaining variables second.

    ``key`` maps an exponent tuple to an int with ``key(a) > key(b)`` iff
    ``a > b``.  Keys are additive: ``key(a + b) == key(a) + key(b)``, which the
    Buchberger code relies on when multiplying sorted term lists.
    """

    kind: str = "degrevlex"
    n_elim: int = 0

    def __post_init__(self):
        if self.kind not in ("degrevlex", "block"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "block" and self.n_elim < 1:
            raise ValueError("block order needs n_elim >= 1")
        if self.kind == "degrevlex" and self.n_elim:
            raise ValueError("degrevlex takes no eliminated block")

    @staticmethod
    def _grevlex_key(mono: Sequence[int]) -> int:
        n = len(mono)
        k = sum(mono) << (_BITS * n)
        for i, e in enumerate(mono):
            k -= e << (_BITS * i)
        return k

    def key(self, mono: Sequence[int]) -> int:
        if self.kind == "degrevlex":
            return self._grevlex_key(mono)
        m = self.n_elim
        rest = len(mono) - m
        shift = _BITS * (rest + 2)
        return (self._grevlex_key(mono[:m]) << shift) + self._grevlex_key(mono[m:])

    def eliminates(self, var: int) -> bool:
        return self.kind == "block" and var < self.n_elim


DEGREVLEX = MonomialOrder()


def _inverse(c: int, p: int) -> int:
    c %= p
    if c == 0:
        raise ModulusError(f"0 has no inverse modulo {p}")
    try:
        return pow(c, -1, p)
    except ValueError as exc:  # p not prime
        raise ModulusError(f"{c} is not invertible modulo {p}") from exc


def coerce_coefficient(c, modulus: int):
    """Bring ``c`` (int, Fraction, or anything Fraction accepts) into the field."""
    if modulus == 0:
        return Fraction(c)
    if isinstance(c, Fraction):
        return (c.numerator % modulus) * _inverse(c.denominator, modulus) % modulus
    if isinstance(c, int):
        return c % modulus
    return coerce_coefficient(Fraction(c), modulus)


class Poly:
    """Immutable sparse polynomial in ``nvars`` variables."""

    __slots__ = ("terms", "nvars", "modulus")

    def __init__(self, terms: Mapping[tuple, object] | Iterable, nvars: int, modulus: int = 0):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[tuple, object] = {}
        for mono, c in items:
            mono = tuple(int(e) for e in mono)
            if len(mono) != nvars:
                raise ValueError(f"exponent {mono} does not have length {nvars}")
            if any(e < 0 for e in mono):
                raise ValueError(f"negative exponent in {mono}")
            c = coerce_coefficient(c, modulus)
            if mono in clean:
                c = clean[mono] + c
                if modulus:
                    c %= modulus
            if c:
                clean[mono] = c
            else:
                clean.pop(mono, None)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "modulus", modulus)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def _trusted(cls, terms: dict, nvars: int, modulus: int) -> "Poly":
        # Skips normalization; callers guarantee reduced nonzero coefficients.
        self = object.__new__(cls)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "modulus", modulus)
        return self

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, nvars: int, modulus: int = 0) -> "Poly":
        return cls._trusted({}, nvars, modulus)

    @classmethod
    def constant(cls, c, nvars: int, modulus: int = 0) -> "Poly":
        return cls({(0,) * nvars: c}, nvars, modulus)

    @classmethod
    def variable(cls, i: int, nvars: int, modulus: int = 0) -> "Poly":
        mono = [0] * nvars
        mono[i] = 1
        return cls({tuple(mono): 1}, nvars, modulus)

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff=1, modulus: int = 0) -> "Poly":
        return cls({tuple(exps): coeff}, len(exps), modulus)

    # -- queries ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def support(self) -> set[int]:
        """Indices of variables that occur."""
        out: set[int] = set()
        for m in self.terms:
            out.update(i for i, e in enumerate(m) if e)
        return out

    def leading_monomial(self, order: MonomialOrder = DEGREVLEX) -> tuple:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=order.key)

    def leading_coefficient(self, order: MonomialOrder = DEGREVLEX):
        return self.terms[self.leading_monomial(order)]

    def sorted_terms(self, order: MonomialOrder = DEGREVLEX) -> list[tuple[tuple, object]]:
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    # -- arithmetic -------------------------------------------------------
    def _check(self, other: "Poly"):
        if self.nvars != other.nvars or self.modulus != other.modulus:
            raise RingMismatchError(
                f"ring ({self.nvars} vars, mod {self.modulus}) vs "
                f"({other.nvars} vars, mod {other.modulus})"
            )

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        return Poly.constant(other, self.nvars, self.modulus)

    def __add__(self, other) -> "Poly":
        other = self._lift(other)
        out = dict(self.terms)
        p = self.modulus
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if p:
                s %= p
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly._trusted(out, self.nvars, p)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        p = self.modulus
        return Poly._trusted({m: (-c) % p if p else -c for m, c in self.terms.items()}, self.nvars, p)

    def __sub__(self, other) -> "Poly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "Poly":
        return self._lift(other) - self

    def scale(self, c) -> "Poly":
        c = coerce_coefficient(c, self.modulus)
        if not c:
            return Poly.zero(self.nvars, self.modulus)
        p = self.modulus
        return Poly._trusted(
            {m: (v * c) % p if p else v * c for m, v in self.terms.items()}, self.nvars, p
        )

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return self.scale(other)
        self._check(other)
        p = self.modulus
        out: dict[tuple, object] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        if p:
            out = {m: c % p for m, c in out.items() if c % p}
        else:
            out = {m: c for m, c in out.items() if c}
        return Poly._trusted(out, self.nvars, p)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        result = Poly.constant(1, self.nvars, self.modulus)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def monic(self, order: MonomialOrder = DEGREVLEX) -> "Poly":
        if not self.terms:
            return self
        lc = self.leading_coefficient(order)
        if self.modulus:
            return self.scale(_inverse(lc, self.modulus))
        return self.scale(1 / lc)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.terms == Poly.constant(other, self.nvars, self.modulus).terms
        if not isinstance(other, Poly):
            return NotImplemented
        return (
            self.nvars == other.nvars
            and self.modulus == other.modulus
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.nvars, self.modulus, frozenset(self.terms.items())))

    # -- conversions ------------------------------------------------------
    def to_modulus(self, p: int) -> "Poly":
        """Reduce a rational polynomial modulo the prime ``p``."""
        if self.modulus == p:
            return self
        if self.modulus != 0:
            raise RingMismatchError("only rational polynomials can be reduced mod p")
        return Poly(self.terms, self.nvars, p)

    def embed(self, nvars: int, offset: int = 0) -> "Poly":
        """Place this polynomial's variables at ``offset..`` of a larger ring."""
        if offset + self.nvars > nvars:
            raise ValueError("target ring too small")
        pad_l = (0,) * offset
        pad_r = (0,) * (nvars - offset - self.nvars)
        return Poly._trusted(
            {pad_l + m + pad_r: c for m, c in self.terms.items()}, nvars, self.modulus
        )

    def restrict(self, keep: Sequence[int]) -> "Poly":
        """Drop all variables not in ``keep``; they must not occur."""
        keep = list(keep)
        dropped = set(range(self.nvars)) - set(keep)
        if self.support() & dropped:
            raise ValueError("polynomial involves a dropped variable")
        return Poly._trusted(
            {tuple(m[i] for i in keep): c for m, c in self.terms.items()}, len(keep), self.modulus
        )

    def evaluate(self, point: Sequence):
        """Evaluate at a point; coefficients are promoted to the point's type.

        Over F_p, coefficients are read as their symmetric integer lift.
        """
        if len(point) != self.nvars:
            raise ValueError("point has wrong length")
        p = self.modulus
        total = 0
        for m, c in self.terms.items():
            if p:
                c = c - p if c > p // 2 else c
            term = c
            for x, e in zip(point, m):
                if e:
                    term = term * x**e
            total = total + term
        return total

    def to_str(self, names: Sequence[str] | None = None, order: MonomialOrder = DEGREVLEX) -> str:
        if not self.terms:
            return "0"
        names = names or [f"z{i + 1}" for i in range(self.nvars)]
        p = self.modulus
        parts = []
        for m, c in self.sorted_terms(order):
            if p and c > p // 2:
                c = c - p
            mono = "*".join(
                names[i] if e == 1 else f"{names[i]}^{e}" for i, e in enumerate(m) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        s = " + ".join(parts)
        return s.replace("+ -", "- ")

    def __repr__(self) -> str:
        ring = f"GF({self.modulus})" if self.modulus else "QQ"
        return f"Poly({self.to_str()}, {ring}[{self.nvars}])"


@dataclass(frozen=True)
class Ideal:
    """Ideal given by generators over a common ring.

    ``order`` is set only when ``generators`` is the reduced Groebner basis
    for that order.
    """

    generators: tuple[Poly, ...]
    nvars: int
    modulus: int
    order: MonomialOrder | None = field(default=None, compare=False)

    @classmethod
    def of(cls, generators: Iterable[Poly], nvars: int | None = None, modulus: int | None = None):
        gens = tuple(generators)
        if nvars is None or modulus is None:
            if not gens:
                raise ValueError("empty ideal needs explicit nvars and modulus")
            nvars = gens[0].nvars if nvars is None else nvars
            modulus = gens[0].modulus if modulus is None else modulus
        for g in gens:
            if g.nvars != nvars or g.modulus != modulus:
                raise RingMismatchError("generators do not share a ring")
        return cls(gens, nvars, modulus)

    def nonzero(self) -> tuple[Poly, ...]:
        return tuple(g for g in self.generators if g)

    def is_groebner(self) -> bool:
        return self.order is not None

    def leading_monomials(self) -> list[tuple]:
        if self.order is None:
            raise ValueError("leading monomials requested from a non-Groebner ideal")
        return [g.leading_monomial(self.order) for g in self.generators]

    def is_unit(self) -> bool:
        """True if this Groebner basis is {1}."""
        zero = (0,) * self.nvars
        return self.order is not None and any(zero in g.terms for g in self.generators)

    def to_modulus(self, p: int) -> "Ideal":
        return Ideal.of((g.to_modulus(p) for g in self.generators), self.nvars, p)

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)
