from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from largeness.algebra import PRIMES, Poly, contains, groebner_basis
from largeness.moment import (
    MU_RHO_SCALE,
    complex_moment_values,
    complex_real_consistency,
    generic_rank,
    jacobian_matrix,
    moment_components,
    real_moment,
)
from largeness.repspec import build_classical, build_sl2, build_torus, change_basis


def as_sympy(poly, names):
    syms = sympy.symbols(names)
    return sympy.expand(sum(
        sympy.Rational(c.numerator, c.denominator) * sympy.prod([s ** e for s, e in zip(syms, m)])
        for m, c in poly.terms.items()
    ))


def test_torus_quadrics():
    m = moment_components(build_torus([[1]]))
    assert str(m) == "x1*y1"
    m = moment_components(build_torus([[1, -1]]))
    x1, x2, y1, y2 = sympy.symbols("x1 x2 y1 y2")
    assert as_sympy(m.quadrics[0], m.names) == x1 * y1 - x2 * y2


def test_sl2_r1_quadrics():
    m = moment_components(build_sl2([1]))
    x1, x2, y1, y2 = sympy.symbols("x1 x2 y1 y2")
    got = [as_sympy(q, m.names) for q in m.quadrics]
    assert got == [y1 * x2, y2 * x1, x1 * y1 - x2 * y2]


def test_quadrics_are_bilinear():
    for a in (build_sl2([1, 3]), build_classical("gl", 2, 1, 1)):
        m = moment_components(a)
        n = m.n
        for q in m.quadrics:
            for mono in q.terms:
                assert sum(mono[:n]) == 1 and sum(mono[n:]) == 1


def test_jacobian_entries():
    j = jacobian_matrix(build_torus([[1, -1]]))
    assert j.to_str() == [["x1"], ["-x2"]]
    j = jacobian_matrix(build_sl2([1]))
    assert j.to_str() == [["x2", "0", "x1"], ["0", "x1", "-x2"]]


@pytest.mark.parametrize("degrees", [[1], [1, 1], [2], [3]])
def test_reconstruction_y_times_jacobian(degrees):
    a = build_sl2(degrees)
    m, j = moment_components(a), jacobian_matrix(a)
    n = a.dim_v
    for col in range(a.dim_g):
        acc = Poly.zero(2 * n)
        for i in range(n):
            acc = acc + Poly.variable(n + i, 2 * n) * j.entries[i][col].embed(2 * n, 0)
        assert acc == m.quadrics[col]


@pytest.mark.parametrize(
    "action, rank",
    [(build_torus([[1, -1]]), 1), (build_sl2([1]), 2), (build_sl2([1, 1]), 3), (build_sl2([2]), 2),
     (build_torus([[0, 0]]), 0)],
)
def test_generic_rank(action, rank):
    assert generic_rank(jacobian_matrix(action)) == rank


def test_minor_cap():
    from largeness.errors import ResourceLimitError

    j = jacobian_matrix(build_sl2([1, 1]))
    assert j.minor_count(2) == 6 * 3
    with pytest.raises(ResourceLimitError):
        j.minors(2, PRIMES[0], max_minors=5)


def test_minors_match_sympy_determinants():
    a = build_sl2([1, 2])
    j = jacobian_matrix(a)
    xs = sympy.symbols(f"x1:{a.dim_v + 1}")
    M = sympy.Matrix([[as_sympy(e, [str(x) for x in xs]) for e in row] for row in j.entries])
    from itertools import combinations

    expected = set()
    p = PRIMES[0]
    for rows in combinations(range(a.dim_v), 3):
        d = sympy.expand(M.extract(list(rows), [0, 1, 2]).det())
        if d != 0:
            poly = sympy.Poly(d, *xs)
            expected.add(Poly({m: int(c) % p for m, c in poly.terms()}, a.dim_v, p))
    assert set(j.minors(3, p)) == expected


def test_ideal_is_basis_independent():
    a = build_sl2([2])
    b = change_basis(a, [[1, 2, 0], [0, 1, -1], [3, 0, 1]])
    p = PRIMES[0]
    ga = groebner_basis(moment_components(a).ideal(p))
    gb = groebner_basis(moment_components(b).ideal(p))
    for q in moment_components(b).ideal(p):
        assert contains(ga, q)
    for q in moment_components(a).ideal(p):
        assert contains(gb, q)


# -- real moment map ----------------------------------------------------------------

def test_real_moment_torus():
    a = build_torus([[1, -1]])
    assert np.allclose(real_moment(a, [1, 1]), [0])
    assert np.allclose(real_moment(a, [2, 1]), [1.5])
    assert np.allclose(real_moment(build_torus([[1]]), [3]), [4.5])
    assert np.array_equal(real_moment(build_sl2([3]), np.zeros(4)), np.zeros(3))


def test_real_moment_rejects_non_skew_basis():
    a = build_torus([[1, -1]])
    with pytest.raises(ValueError):
        real_moment(a, [1, 2j + 1], compact=np.array([np.diag([1.0, 2.0]) + np.eye(2)[::-1] * 1j]))


complex_vectors = st.lists(
    st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False), min_size=4, max_size=4
)


@given(complex_vectors, st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False))
@settings(max_examples=50, deadline=None)
def test_rho_is_quadratic(v, lam):
    a = build_sl2([3])
    r1 = real_moment(a, np.array(v) * lam)
    r0 = real_moment(a, v)
    assert np.allclose(r1, abs(lam) ** 2 * r0, atol=1e-9)


@pytest.mark.parametrize(
    "action",
    [build_torus([[1, -1], [2, 0]]), build_sl2([1]), build_sl2([2, 3]), build_classical("gl", 2, 1, 1),
     build_classical("so", 3, 2), build_classical("sp", 1, 2)],
    ids=lambda a: a.label,
)
def test_complex_real_consistency(action):
    rng = np.random.default_rng(7)
    assert complex_real_consistency(action, np.zeros(action.dim_v)) == 0
    for _ in range(20):
        v = rng.normal(size=action.dim_v) + 1j * rng.normal(size=action.dim_v)
        v *= rng.uniform(0, 10) / np.linalg.norm(v)
        assert complex_real_consistency(action, v) < 1e-10


def test_consistency_scalar_direct():
    a = build_torus([[1, -1]])
    v = np.array([1.0, 0.0])
    mu = complex_moment_values(a, v)
    assert mu[0] == 1
    # compact element i*A: mu = i * 1, rho = |v1|^2 / 2
    assert a.compact_coeffs[0, 0] * mu[0] == MU_RHO_SCALE * real_moment(a, v)[0]
    assert complex_real_consistency(a, v) == 0
