import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netnl import linalg
from netnl.errors import DimensionError
from netnl.linalg import I2, SX, SY, SZ


def random_matrix(seed, d):
    rng = np.random.default_rng(seed)
    return rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))


def test_paulis_are_involutions():
    for p in (SX, SY, SZ):
        assert linalg.is_involution(p)
    assert np.allclose(SX @ SY, 1j * SZ)


def test_anticommutator_of_distinct_paulis_vanishes():
    assert np.allclose(linalg.anticommutator(SX, SZ), 0)
    assert np.allclose(linalg.anticommutator(SZ, SZ), 2 * I2)


def test_matrix_is_read_only_and_2d():
    m = linalg.matrix([[1, 0], [0, 1]])
    with pytest.raises(ValueError):
        m[0, 0] = 2
    with pytest.raises(DimensionError):
        linalg.matrix([1, 2, 3])


def test_non_hermitian_is_not_an_involution():
    assert not linalg.is_involution(np.array([[0, 1], [0, 0]], dtype=complex))


@given(st.integers(0, 2**32 - 1), st.sampled_from([1, 2, 3, 4]))
def test_trace_product_matches_trace_of_product(seed, d):
    a, b = random_matrix(seed, d), random_matrix(seed + 1, d)
    assert abs(linalg.trace_product(a, b) - np.trace(a @ b)) < 1e-10


def test_trace_product_rejects_mismatched_shapes():
    with pytest.raises(DimensionError):
        linalg.trace_product(np.eye(2), np.eye(3))


def test_kron_all_of_nothing_is_scalar_one():
    assert linalg.kron_all([]).shape == (1, 1)
    assert np.allclose(linalg.kron_all([SX, SZ]), np.kron(SX, SZ))


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1), st.integers(0, 2))
def test_apply_local_matches_kron_embedding(seed, axis):
    rng = np.random.default_rng(seed)
    dims = (2, 3, 2)
    op = random_matrix(seed, dims[axis])
    psi = rng.normal(size=dims) + 1j * rng.normal(size=dims)
    factors = [np.eye(d) for d in dims]
    factors[axis] = op
    expected = linalg.kron_all(factors) @ psi.reshape(-1)
    got = linalg.apply_local(op, psi, axis).reshape(-1)
    assert np.allclose(got, expected)


def test_apply_local_dimension_check():
    with pytest.raises(DimensionError):
        linalg.apply_local(np.eye(3), np.zeros((2, 2)), 0)
    with pytest.raises(DimensionError):
        linalg.apply(np.eye(3), np.zeros(2))


def test_state_vector_requires_unit_norm():
    with pytest.raises(ValueError):
        linalg.state_vector([1, 1j])
    v = linalg.state_vector(np.array([1, 1j]) / np.sqrt(2))
    assert abs(linalg.norm(v) - 1) < 1e-15
