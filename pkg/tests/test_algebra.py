import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from evochain.algebra import (
    NotNaturalBasis, SingularBasis, derived_dim, det3, equal_rows, inv3, multiply, transform, vanishes,
)
from evochain.canonical import LABELS, Label, canonical_matrix

from _known_changes import equal_rows_to_e7 as eq311

E1, E2, E3 = np.eye(3)


def test_distinct_basis_vectors_annihilate():
    m = np.arange(9.0).reshape(3, 3)
    assert np.array_equal(multiply(E1, E2, m), np.zeros(3))


def test_multiply_examples():
    assert np.allclose(multiply(E1, E1, equal_rows(1, 2, 3)), [1, 1, 1])
    assert np.allclose(multiply(E3, E3, canonical_matrix(Label.E7)), [1, 0, 0])


def test_transform_identity_is_exact():
    m = np.random.default_rng(0).normal(size=(3, 3))
    assert np.array_equal(transform(m, np.eye(3)), m)


def test_transform_to_e4():
    lam = 2.5
    p = np.array([[1 / lam] * 3, [0, 1, 0], [0, 0, 1]])
    assert np.allclose(transform(equal_rows(lam, 0, 0), p), canonical_matrix(Label.E4), atol=1e-12)


def test_transform_with_printed_e7_change():
    got = transform(equal_rows(1, 1, 1), eq311(1, 1, 1))
    assert np.allclose(got, canonical_matrix(Label.E7), atol=1e-12)


def test_transform_errors():
    with pytest.raises(SingularBasis):
        transform(np.eye(3), np.zeros((3, 3)))
    with pytest.raises(NotNaturalBasis):
        transform(equal_rows(1, 1, 1), np.array([[1, 1, 0], [0, 1, 0], [0, 0, 1.0]]))


def test_derived_dim_examples():
    assert derived_dim(np.zeros((3, 3))) == 0
    assert derived_dim(canonical_matrix(Label.E7)) == 1
    assert derived_dim(equal_rows(1, 2, 3)) == 1
    assert derived_dim(np.eye(3)) == 3
    for label in LABELS:
        assert derived_dim(canonical_matrix(label)) == (0 if label == Label.E0 else 1)


def test_inverse_and_determinant():
    p = np.array([[2, 1, 0], [0, 3, 1], [1, 0, 1.0]])
    assert det3(p) == pytest.approx(np.linalg.det(p))
    assert np.allclose(inv3(p) @ p, np.eye(3))


def test_vanishes_is_relative_above_one():
    assert vanishes(1e-10)
    assert not vanishes(1e-8)
    assert vanishes(1e-6, scale=1e4)


vectors = st.lists(st.floats(-10, 10), min_size=3, max_size=3).map(np.array)
matrices = st.lists(st.floats(-10, 10), min_size=9, max_size=9).map(lambda v: np.array(v).reshape(3, 3))
scalars = st.floats(-10, 10)


@given(vectors, vectors, vectors, matrices, scalars)
def test_multiply_is_symmetric_and_bilinear(x, y, z, m, c):
    assert np.allclose(multiply(x, y, m), multiply(y, x, m))
    lhs = multiply(c * x + z, y, m)
    rhs = c * multiply(x, y, m) + multiply(z, y, m)
    assert np.allclose(lhs, rhs, atol=1e-9 * max(1.0, np.abs(lhs).max(), np.abs(rhs).max()))


def _natural_change(perm, scales):
    p = np.zeros((3, 3))
    for i, (k, d) in enumerate(zip(perm, scales)):
        p[i, k] = d
    return p


perms = st.permutations([0, 1, 2])
nonzero = st.floats(0.2, 5).flatmap(lambda v: st.sampled_from([v, -v]))
scales = st.lists(nonzero, min_size=3, max_size=3)


@given(matrices, perms, scales, perms, scales)
def test_transform_composes(m, perm1, sc1, perm2, sc2):
    # scaled permutations always map natural bases to natural bases
    p1, p2 = _natural_change(perm1, sc1), _natural_change(perm2, sc2)
    assume(np.abs(m).max() > 1e-3)
    inner = transform(m, p2)
    lhs = transform(m, p1 @ p2)
    rhs = transform(inner, p1)
    assert np.allclose(lhs, rhs, rtol=1e-9, atol=1e-9 * np.abs(lhs).max())
