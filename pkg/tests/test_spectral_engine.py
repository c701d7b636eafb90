import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from regfall import fourier_core as fc
from regfall import lagrangian as lag
from regfall import spectral_engine as se
from regfall.errors import LayoutMismatch
from regfall.fourier_core import TrigPoly


def test_diagonal_and_swap():
    w, _ = se.eigensolve(se.DenseSymmetric(np.diag([3.0, 1.0, 2.0])))
    assert w.tolist() == [1.0, 2.0, 3.0]
    w, v = se.eigensolve(se.DenseSymmetric([[0.0, 1.0], [1.0, 0.0]]))
    np.testing.assert_allclose(w, [-1.0, 1.0], atol=1e-15)


def test_symmetrized_on_construction():
    M = se.DenseSymmetric([[1.0, 2.0], [2.5, 1.0]])
    assert M.asymmetry == pytest.approx(0.5)
    assert np.array_equal(M.entries, M.entries.T)


@pytest.mark.parametrize("method", ["jacobi", "lapack"])
def test_random_50_residual(method):
    rng = np.random.default_rng(7)
    A = rng.normal(size=(50, 50))
    M = se.DenseSymmetric(A + A.T)
    w, v = se.eigensolve(M, method=method)
    norm = np.linalg.norm(M.entries)
    assert np.max(np.linalg.norm(M.entries @ v - v * w, axis=0)) <= 1e-10 * norm
    np.testing.assert_allclose(v.T @ v, np.eye(50), atol=1e-10)
    np.testing.assert_allclose(v @ np.diag(w) @ v.T, M.entries, atol=1e-10 * norm)


def test_jacobi_matches_lapack():
    rng = np.random.default_rng(8)
    A = rng.normal(size=(30, 30))
    w1, _ = se.eigensolve(A + A.T, "jacobi")
    w2, _ = se.eigensolve(A + A.T, "lapack")
    np.testing.assert_allclose(w1, w2, atol=1e-11)


def test_deterministic():
    rng = np.random.default_rng(9)
    A = rng.normal(size=(20, 20))
    a = se.eigensolve(A + A.T)
    b = se.eigensolve((A + A.T).copy())
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


@given(arrays(float, (3, 2, 2), elements=st.floats(-5, 5)))
def test_block_diagonal_union(blocks):
    M = np.zeros((6, 6))
    expected = []
    for i, b in enumerate(blocks):
        b = 0.5 * (b + b.T)
        M[2 * i:2 * i + 2, 2 * i:2 * i + 2] = b
        tr, det = b[0, 0] + b[1, 1], b[0, 0] * b[1, 1] - b[0, 1] ** 2
        r = np.sqrt(max(tr * tr / 4 - det, 0.0))
        expected += [tr / 2 - r, tr / 2 + r]
    w, _ = se.eigensolve(M)
    np.testing.assert_allclose(w, np.sort(expected), atol=1e-9)


def test_cluster():
    assert [(v, m) for v, m, _ in se.cluster([0.0, 1e-12, 5.0], 1e-7)] == [(5e-13, 2), (5.0, 1)]
    assert se.cluster([]) == []


def test_cluster_lag_multiplicities_k1():
    num = lag.lag_spectrum_numeric(1, 8)
    mults = {round(e.value / (4 * np.pi ** 2), 6): e.multiplicity for e in num}
    assert mults[-1.0] == 1 and mults[0.0] == 1 and mults[12.0] == 1
    assert mults[3.0] == 2 and mults[8.0] == 2


def test_vector_to_loops_unit_slots():
    N = 3
    e = np.zeros(se.pair_dim(N))
    e[0] = 1.0
    xi, eta = se.vector_to_loops(e)
    assert xi(0.3) == 1.0 and eta(0.3) == 0.0
    k = 2
    e = np.zeros(se.pair_dim(N))
    e[2 + 4 * (k - 1)] = 1.0
    xi, eta = se.vector_to_loops(e)
    assert xi.cos_coeffs[k - 1] == pytest.approx(np.sqrt(2.0))
    assert fc.norm_sq(eta) == 0.0
    with pytest.raises(LayoutMismatch):
        se.vector_to_loops(np.zeros(7))


@given(arrays(float, 14, elements=st.floats(-3, 3)), arrays(float, 14, elements=st.floats(-3, 3)))
def test_pair_layout_is_isometric(u, v):
    a, b = se.vector_to_loops(u), se.vector_to_loops(v)
    ip = fc.inner(a[0], b[0]) + fc.inner(a[1], b[1])
    assert ip == pytest.approx(u @ v, abs=1e-10)
    np.testing.assert_allclose(se.loops_to_vector(*a, 3), u, atol=1e-14)


def test_scalar_assembly_of_second_derivative():
    M = se.assemble_scalar(lambda f: -fc.second_derivative(f), 3)
    w, _ = se.eigensolve(M)
    expected = np.sort([0.0] + [(2 * np.pi * n) ** 2 for n in (1, 1, 2, 2, 3, 3)])
    np.testing.assert_allclose(w, expected, atol=1e-9)
    assert se.vector_to_loop(se.loop_to_vector(TrigPoly.cos_mode(2), 3)).cos_coeffs[1] == \
        pytest.approx(1.0)
