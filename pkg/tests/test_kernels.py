"""Backend equivalence: the compiled kernels and the numpy fallback must
agree (bit-for-bit for shortest paths, to tight tolerance for the scans)."""

import numpy as np
import pytest

from coarsescope import _kernels


@pytest.fixture
def restore_backend():
    prev = _kernels.backend_name()
    yield
    _kernels.set_backend(prev)


def _random_inputs(seed, n=25, v=6):
    rng = np.random.default_rng(seed)
    pts = rng.uniform(0, 10, size=(n, 2))
    d = np.sqrt(((pts[:, None] - pts[None]) ** 2).sum(axis=2))
    w = rng.uniform(0, 1, size=(n, v))
    w /= w.sum(axis=1, keepdims=True)
    return w, d


def test_floyd_warshall_bit_identical(restore_backend):
    rng = np.random.default_rng(7)
    d = rng.uniform(0.5, 5.0, size=(15, 15))
    d = np.minimum(d, d.T)
    np.fill_diagonal(d, 0.0)
    _kernels.set_backend("numba")
    a = _kernels.floyd_warshall(d.copy())
    _kernels.set_backend("numpy")
    b = _kernels.floyd_warshall(d.copy())
    assert np.array_equal(a, b)


def test_scan_kernels_agree(restore_backend):
    for seed in range(5):
        w, d = _random_inputs(seed)
        _kernels.set_backend("numba")
        lip_a = _kernels.lipschitz_scan(w, d, 0.3, 0.1)
        var_a = _kernels.variation_scan(w, d, 3.0)
        _kernels.set_backend("numpy")
        lip_b = _kernels.lipschitz_scan(w, d, 0.3, 0.1)
        var_b = _kernels.variation_scan(w, d, 3.0)
        assert lip_a[0] == pytest.approx(lip_b[0], abs=1e-12)
        assert lip_a[3] == pytest.approx(lip_b[3], abs=1e-12)
        assert var_a[0] == pytest.approx(var_b[0], abs=1e-12)


def test_complement_min_dist_agrees(restore_backend):
    w, d = _random_inputs(3)
    n = d.shape[0]
    member = np.zeros((n, 3), dtype=bool)
    member[::2, 0] = True
    member[:10, 1] = True
    member[:, 2] = True  # full element: complement empty, value inf
    _kernels.set_backend("numba")
    a = _kernels.complement_min_dist(d, member)
    _kernels.set_backend("numpy")
    b = _kernels.complement_min_dist(d, member)
    assert np.allclose(a, b)
    # non-members sit in the complement: distance exactly zero
    assert (a[~member[:, 0], 0] == 0.0).all()
    assert np.isinf(a[:, 2]).all()


def test_element_mesh_agrees(restore_backend):
    w, d = _random_inputs(11)
    n = d.shape[0]
    member = np.zeros((n, 2), dtype=bool)
    member[:9, 0] = True
    member[5, 1] = True  # singleton element has mesh 0
    _kernels.set_backend("numba")
    a = _kernels.element_mesh(d, member)
    _kernels.set_backend("numpy")
    b = _kernels.element_mesh(d, member)
    assert np.allclose(a, b)
    assert a[1] == 0.0


def _to_csr(w):
    indptr = [0]
    indices, data = [], []
    for row in w:
        nz = np.nonzero(row > 0)[0]
        indices.extend(nz.tolist())
        data.extend(row[nz].tolist())
        indptr.append(len(indices))
    return (
        np.array(indptr, dtype=np.int64),
        np.array(indices, dtype=np.int64),
        np.array(data, dtype=np.float64),
    )


def test_sparse_scans_agree_with_dense_both_backends(restore_backend):
    rng = np.random.default_rng(5)
    w, d = _random_inputs(5, n=30, v=12)
    # sparsify: keep two entries per row
    for i in range(w.shape[0]):
        keep = rng.choice(12, size=2, replace=False)
        mask = np.zeros(12, dtype=bool)
        mask[keep] = True
        w[i, ~mask] = 0.0
        w[i] /= w[i].sum()
    indptr, indices, data = _to_csr(w)
    for backend in ("numba", "numpy"):
        _kernels.set_backend(backend)
        dense_lip = _kernels.lipschitz_scan(w, d, 0.4, 0.2)
        sparse_lip = _kernels.lipschitz_scan_sparse(indptr, indices, data, 12, d, 0.4, 0.2)
        assert sparse_lip[0] == pytest.approx(dense_lip[0], abs=1e-12)
        assert sparse_lip[3] == pytest.approx(dense_lip[3], abs=1e-12)
        dense_var = _kernels.variation_scan(w, d, 4.0)
        sparse_var = _kernels.variation_scan_sparse(indptr, indices, data, 12, d, 4.0)
        assert sparse_var[0] == pytest.approx(dense_var[0], abs=1e-12)


def test_unknown_backend_rejected():
    with pytest.raises(Exception):
        _kernels.set_backend("fortran")
