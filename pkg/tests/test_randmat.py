import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from grassfeed.errors import NotHermitian
from grassfeed.randmat import gram, hermitian_eigvals, is_hermitian, sample_complex_gaussian, substream, svd


def test_same_seed_same_entry():
    a = sample_complex_gaussian(1, 1, substream(7))
    b = sample_complex_gaussian(1, 1, substream(7))
    assert a[0, 0] == b[0, 0]


def test_substreams_are_independent_of_each_other():
    a = substream(7, 1).standard_normal(4)
    b = substream(7, 2).standard_normal(4)
    assert not np.allclose(a, b)
    # stream 2 does not depend on whether stream 1 was consumed
    assert np.array_equal(b, substream(7, 2).standard_normal(4))


def test_sampler_moments():
    h = sample_complex_gaussian(1, 1, substream(11), batch=(10**6,)).ravel()
    assert abs(np.mean(np.abs(h) ** 2) - 1.0) < 0.01
    assert abs(h.real.mean()) < 0.01
    assert abs(h.imag.mean()) < 0.01
    # independent real and imaginary halves with variance 1/2
    assert abs(h.real.var() - 0.5) < 0.005
    assert abs(np.mean(h.real * h.imag)) < 0.005


def test_sampler_shape_and_dtype():
    h = sample_complex_gaussian(3, 2, substream(0), batch=(5, 4))
    assert h.shape == (5, 4, 3, 2)
    assert h.dtype == np.complex128
    with pytest.raises(ValueError):
        sample_complex_gaussian(0, 2, substream(0))


def test_svd_identity_and_diagonal():
    assert np.allclose(svd(np.eye(2)).singular_values, [1.0, 1.0])
    r = svd(np.diag([3.0, 2.0]).astype(complex))
    assert np.allclose(r.singular_values, [3.0, 2.0])
    assert np.allclose(np.abs(r.left_vectors), np.eye(2))
    assert np.allclose(np.abs(r.right_vectors), np.eye(2))


def test_svd_reconstruction():
    M = sample_complex_gaussian(4, 2, substream(3))
    u, s, v = svd(M)
    assert np.max(np.abs(u @ np.diag(s) @ np.conj(v.T) - M)) <= 1e-10


def test_svd_rejects_empty():
    with pytest.raises(ValueError):
        svd(np.zeros((0, 3)))


def test_hermitian_eigvals_descending():
    assert np.allclose(hermitian_eigvals(np.diag([1.0, 5.0, 2.0])), [5.0, 2.0, 1.0])


def test_hermitian_eigvals_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        hermitian_eigvals(np.array([[1.0, 2.0], [0.0, 1.0]]))
    assert not is_hermitian(np.ones((2, 3)))


def test_wishart_eigs_match_singular_values():
    H = sample_complex_gaussian(2, 2, substream(5))
    ev = hermitian_eigvals(gram(H))
    assert np.all(ev >= -1e-10)
    assert np.allclose(ev, svd(H).singular_values ** 2, atol=1e-8)


@given(rows=st.integers(1, 6), cols=st.integers(1, 6), seed=st.integers(0, 2**32 - 1))
def test_svd_invariants(rows, cols, seed):
    M = sample_complex_gaussian(rows, cols, substream(seed))
    s = svd(M).singular_values
    assert np.all(np.diff(s) <= 1e-12)
    assert np.isclose(np.sum(s**2), np.linalg.norm(M) ** 2, rtol=1e-8)
    ev = hermitian_eigvals(gram(M))[: len(s)]
    assert np.allclose(ev, s**2, rtol=1e-8, atol=1e-10)
