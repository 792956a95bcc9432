import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import connected_graphs
from gonbound import kernels
from gonbound.spectral import laplacian


def _chips(g, data):
    return np.array([data.draw(st.integers(0, 4)) for _ in range(g.n)], dtype=np.int64)


def test_active_backend_is_registered():
    assert kernels.BACKEND in kernels.BACKENDS
    assert kernels.get_backend() is kernels.BACKENDS[kernels.BACKEND]


def test_burn_path_example(backend):
    # a-b-c with one chip at c: b burns, c holds
    indptr = np.array([0, 1, 3, 4], dtype=np.int64)
    indices = np.array([1, 0, 2, 1], dtype=np.int64)
    chips = np.array([0, 0, 1], dtype=np.int64)
    assert backend.dhar_burn(indptr, indices, chips, 0).tolist() == [0, 0, 1]


@given(connected_graphs(min_n=2), st.data())
def test_backends_agree_on_burn_and_reduce(g, data):
    if len(kernels.BACKENDS) < 2:
        pytest.skip("compiled backend not built")
    indptr, indices = g.csr
    chips = _chips(g, data)
    q = data.draw(st.integers(0, g.n - 1))
    chips[q] = 0
    py, cy = kernels.BACKENDS["python"], kernels.BACKENDS["cython"]
    assert np.array_equal(py.dhar_burn(indptr, indices, chips, q), cy.dhar_burn(indptr, indices, chips, q))
    a = py.reduce_divisor(indptr, indices, chips, q, 10_000)
    b = cy.reduce_divisor(indptr, indices, chips, q, 10_000)
    assert all(np.array_equal(x, y) for x, y in zip(a[:2], b[:2])) and a[2] == b[2]


def test_round_cap_raises(backend):
    indptr = np.array([0, 1, 2], dtype=np.int64)
    indices = np.array([1, 0], dtype=np.int64)
    with pytest.raises(RuntimeError):
        backend.reduce_divisor(indptr, indices, np.array([0, 5], dtype=np.int64), 0, 0)


@given(connected_graphs(min_n=2, max_n=9))
def test_jacobi_reconstructs_laplacian(g):
    L = laplacian(g)
    for name, mod in kernels.BACKENDS.items():
        w, v = mod.jacobi_eigh(L, 1e-14, 100)
        assert np.all(np.diff(w) >= -1e-12), name
        assert np.linalg.norm(v @ np.diag(w) @ v.T - L) <= 1e-8 * np.linalg.norm(L), name
        assert np.allclose(v.T @ v, np.eye(g.n), atol=1e-10), name
        assert np.allclose(w, np.linalg.eigvalsh(L), atol=1e-9), name


def test_jacobi_zero_matrix(backend):
    w, v = backend.jacobi_eigh(np.zeros((3, 3)), 1e-14, 10)
    assert w.tolist() == [0, 0, 0] and np.array_equal(v, np.eye(3))
