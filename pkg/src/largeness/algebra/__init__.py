"""Exact polynomial and linear algebra over prime fields."""

from .groebner import (
    GroebnerLimits,
    contains,
    groebner_basis,
    hilbert_function,
    krull_dimension,
    normal_form,
    same_ideal,
    saturate,
)
from .linalg import matrix_rank_modp, nullspace_integer, rank_rational, rref_rational
from .poly import DEGREVLEX, Ideal, MonomialOrder, Poly

PRIMES = (32003, 65537)

__all__ = [
    "PRIMES",
    "DEGREVLEX",
    "GroebnerLimits",
    "Ideal",
    "MonomialOrder",
    "Poly",
    "contains",
    "groebner_basis",
    "hilbert_function",
    "krull_dimension",
    "matrix_rank_modp",
    "normal_form",
    "nullspace_integer",
    "rank_rational",
    "rref_rational",
    "same_ideal",
    "saturate",
]
