from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from largeness.errors import SpecError
from largeness.repspec import (
    RepSpec,
    bracket_closure_defect,
    build_classical,
    build_sl2,
    build_torus,
    change_basis,
    direct_sum,
    realize,
)


def mat(A):
    return np.array([[float(x) for x in row] for row in A])


def bracket(a, b):
    return a @ b - b @ a


def test_torus_is_diagonal():
    a = build_torus([[1, 0, -1], [0, 1, -1]])
    assert a.dim_v == 3 and a.dim_g == 2
    assert np.array_equal(mat(a.basis[0]), np.diag([1, 0, -1]))
    assert np.array_equal(mat(a.basis[1]), np.diag([0, 1, -1]))
    assert np.allclose(a.compact_basis[0], 1j * np.diag([1, 0, -1]))
    assert build_torus([[1]]).basis == (((Fraction(1),),),)


def test_sl2_on_r1_is_standard():
    e, f, h = (mat(A) for A in build_sl2([1]).basis)
    assert np.array_equal(e, [[0, 1], [0, 0]])
    assert np.array_equal(f, [[0, 0], [1, 0]])
    assert np.array_equal(h, np.diag([1, -1]))


def test_sl2_on_r2_weights():
    h = mat(build_sl2([2]).basis[2])
    assert np.array_equal(h, np.diag([2, 0, -2]))


@pytest.mark.parametrize("degrees", [[1], [2], [3], [1, 1], [0, 2], [4, 1, 3], [6]])
def test_sl2_relations_exact(degrees):
    e, f, h = build_sl2(degrees).basis
    E, F, H = (np.array(A, dtype=object) for A in (e, f, h))
    assert (H.dot(E) - E.dot(H) == 2 * E).all()
    assert (H.dot(F) - F.dot(H) == -2 * F).all()
    assert (E.dot(F) - F.dot(E) == H).all()


def test_direct_sum_matches_concatenated_degrees():
    a = direct_sum(build_sl2([1]), build_sl2([2]))
    assert a == build_sl2([1, 2])
    b = direct_sum(build_torus([[1]]), build_torus([[-1]]))
    assert b == build_torus([[1, -1]])


def test_direct_sum_dimensions_add():
    a, b = build_sl2([3]), build_sl2([1, 1])
    assert direct_sum(a, b).dim_v == a.dim_v + b.dim_v
    with pytest.raises(ValueError):
        direct_sum(build_sl2([1]), build_torus([[1]]))


CLASSICAL = [
    ("gl", 2, 2, 2, 4, 8),
    ("gl", 3, 1, 0, 9, 3),
    ("sl", 2, 1, 1, 3, 4),
    ("sl", 3, 2, 0, 8, 6),
    ("so", 3, 1, 0, 3, 3),
    ("so", 4, 2, 0, 6, 8),
    ("sp", 1, 1, 0, 3, 2),
    ("sp", 2, 1, 0, 10, 4),
]


@pytest.mark.parametrize("family, n, p, q, k, dim", CLASSICAL)
def test_classical_dimensions_and_closure(family, n, p, q, k, dim):
    a = build_classical(family, n, p, q)
    assert a.dim_g == k and a.dim_v == dim
    assert bracket_closure_defect(a) == 0


def test_so3_basis_is_antisymmetric():
    for A in build_classical("so", 3, 1).basis:
        M = mat(A)
        assert np.array_equal(M, -M.T)


def test_sp2_coincides_with_sl2_on_r1():
    assert build_classical("sp", 1, 1).basis == build_sl2([1]).basis


def test_dual_copies_act_by_negative_transpose():
    a = build_classical("gl", 2, 1, 1)
    for A in a.basis:
        M = mat(A)
        assert np.array_equal(M[2:, 2:], -M[:2, :2].T)


def test_classical_rejects_bad_input():
    with pytest.raises(ValueError):
        build_classical("so", 3, 1, 1)
    with pytest.raises(ValueError):
        build_classical("e8", 3, 1)
    with pytest.raises(ValueError):
        build_classical("gl", 2, 0, 0)


ACTIONS = [
    build_torus([[1, -1, 2]]),
    build_sl2([1]),
    build_sl2([2, 3]),
    build_classical("gl", 2, 2, 1),
    build_classical("sl", 3, 1, 1),
    build_classical("so", 4, 1),
    build_classical("sp", 2, 1),
]


@pytest.mark.parametrize("action", ACTIONS, ids=lambda a: a.label)
def test_compact_basis_is_skew_hermitian_and_spans(action):
    B = action.compact_basis
    for X in B:
        assert np.allclose(X + X.conj().T, 0, atol=1e-12)
        assert np.allclose(np.linalg.eigvals(X).real, 0, atol=1e-9)
    # real span has full dimension k
    real = np.array([np.concatenate([X.real.ravel(), X.imag.ravel()]) for X in B])
    assert np.linalg.matrix_rank(real) == action.dim_g


@pytest.mark.parametrize("action", ACTIONS, ids=lambda a: a.label)
def test_compact_basis_closed_under_bracket(action):
    B = action.compact_basis
    flat = np.array([np.concatenate([X.real.ravel(), X.imag.ravel()]) for X in B]).T
    for X in B:
        for Y in B:
            Z = bracket(X, Y)
            z = np.concatenate([Z.real.ravel(), Z.imag.ravel()])
            coeff, *_ = np.linalg.lstsq(flat, z, rcond=None)
            assert np.allclose(flat @ coeff, z, atol=1e-9)


def test_change_basis_keeps_compact_form():
    a = build_sl2([2])
    b = change_basis(a, [[1, 1, 0], [0, 1, 0], [2, 0, 1]])
    assert np.allclose(a.compact_basis, b.compact_basis)
    assert bracket_closure_defect(b) == 0
    with pytest.raises(ValueError):
        change_basis(a, [[1, 0, 0], [1, 0, 0], [0, 0, 1]])


def test_repspec_validation_paths():
    with pytest.raises(SpecError) as exc:
        RepSpec("sl2", degrees=(1, -2))
    assert exc.value.path == ("rep", "binary_forms")
    with pytest.raises(SpecError):
        RepSpec("torus", weights=((1, 2), (1,)))
    with pytest.raises(SpecError):
        RepSpec("so", n=3, p=1, q=1)
    with pytest.raises(SpecError):
        RepSpec("g2", n=7, p=1)


def test_trivial_summand_flag():
    assert RepSpec("torus", weights=((1, 0, -1),)).has_trivial_summand
    assert RepSpec("sl2", degrees=(0, 2)).has_trivial_summand
    assert not RepSpec("sl2", degrees=(1, 2)).has_trivial_summand
    assert build_sl2([0, 1]).trivial_summand
    assert realize(RepSpec("sp", n=1, p=3)).dim_v == 6


@given(st.lists(st.integers(0, 4), min_size=1, max_size=3))
@settings(max_examples=25, deadline=None)
def test_sl2_bracket_closure_property(degrees):
    a = build_sl2(degrees)
    assert bracket_closure_defect(a) == 0
    assert a.dim_v == sum(d + 1 for d in degrees)
    assert len(a.frame) == a.dim_v and (a.frame > 0).all()
