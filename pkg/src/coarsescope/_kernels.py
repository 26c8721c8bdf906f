"""Hot numeric kernels with two interchangeable backends.

Everything here is a pure function on dense numpy arrays: all-pairs
shortest paths, pairwise l1 Lipschitz/variation scans over partition-of-
unity weight matrices, distance-to-complement tables and per-element mesh.
The numba backend compiles the straightforward loops; the numpy backend is
a vectorised fallback.  COARSESCOPE_BACKEND=numpy forces the fallback.

Worst-pair reporting is deterministic: the first maximiser in row-major
(i, j) order with i < j wins within a backend.
"""

from __future__ import annotations

import os

import numpy as np

INF = np.inf


# ---------------------------------------------------------------- numpy ---

def _floyd_warshall_np(d: np.ndarray) -> np.ndarray:
    n = d.shape[0]
    for k in range(n):
        np.minimum(d, d[:, k : k + 1] + d[k : k + 1, :], out=d)
    return d


def _lipschitz_scan_np(w: np.ndarray, d: np.ndarray, lam: float, c: float):
    """Max excess ||w_i - w_j||_1 - lam*d_ij - c over pairs, plus the tight
    lambda-hat for the given c.  Returns (excess, ei, ej, lam_hat, hi, hj)."""
    n = w.shape[0]
    excess, ei, ej = -INF, -1, -1
    lam_hat, hi, hj = 0.0, -1, -1
    for i in range(n - 1):
        l1 = np.abs(w[i + 1 :] - w[i]).sum(axis=1)
        dij = d[i, i + 1 :]
        ex = l1 - lam * dij - c
        j = int(np.argmax(ex))
        if ex[j] > excess:
            excess, ei, ej = float(ex[j]), i, i + 1 + j
        with np.errstate(divide="ignore", invalid="ignore"):
            cand = np.where(dij > 0.0, (l1 - c) / dij, np.where(l1 > c, INF, 0.0))
        j = int(np.argmax(cand))
        if cand[j] > lam_hat:
            lam_hat, hi, hj = float(cand[j]), i, i + 1 + j
    return excess, ei, ej, lam_hat, hi, hj


def _variation_scan_np(w: np.ndarray, d: np.ndarray, r: float):
    """Max ||w_i - w_j||_1 over pairs with d_ij <= r.  (-1, -1) if no pair."""
    n = w.shape[0]
    best, bi, bj = -INF, -1, -1
    for i in range(n - 1):
        dij = d[i, i + 1 :]
        sel = np.nonzero(dij <= r)[0]
        if sel.size == 0:
            continue
        l1 = np.abs(w[i + 1 + sel] - w[i]).sum(axis=1)
        j = int(np.argmax(l1))
        if l1[j] > best:
            best, bi, bj = float(l1[j]), i, i + 1 + int(sel[j])
    return best, bi, bj


def _complement_min_dist_np(d: np.ndarray, member: np.ndarray) -> np.ndarray:
    """f[x, s] = min distance from x to a point outside element s; inf when
    the complement is empty.  Non-members sit in the complement themselves,
    so their value is exactly 0 and is not recomputed."""
    n, m = d.shape[0], member.shape[1]
    out = np.zeros((n, m))
    for s in range(m):
        comp = ~member[:, s]
        if not comp.any():
            out[:, s] = INF
            continue
        rows = np.nonzero(member[:, s])[0]
        if rows.size:
            out[rows, s] = d[np.ix_(rows, np.nonzero(comp)[0])].min(axis=1)
    return out


def _lipschitz_scan_sparse_np(indptr, indices, data, nverts, d, lam, c):
    """Sparse-row scan: densify and reuse the dense numpy path."""
    w = _densify(indptr, indices, data, nverts)
    return _lipschitz_scan_np(w, d, lam, c)


def _variation_scan_sparse_np(indptr, indices, data, nverts, d, r):
    w = _densify(indptr, indices, data, nverts)
    return _variation_scan_np(w, d, r)


def _densify(indptr, indices, data, nverts) -> np.ndarray:
    n = indptr.shape[0] - 1
    w = np.zeros((n, nverts))
    for i in range(n):
        w[i, indices[indptr[i] : indptr[i + 1]]] = data[indptr[i] : indptr[i + 1]]
    return w


def _element_mesh_np(d: np.ndarray, member: np.ndarray) -> np.ndarray:
    m = member.shape[1]
    out = np.zeros(m)
    for s in range(m):
        idx = np.nonzero(member[:, s])[0]
        if idx.size >= 2:
            out[s] = float(d[np.ix_(idx, idx)].max())
    return out


_NUMPY_IMPL = {
    "floyd_warshall": _floyd_warshall_np,
    "lipschitz_scan": _lipschitz_scan_np,
    "variation_scan": _variation_scan_np,
    "lipschitz_scan_sparse": _lipschitz_scan_sparse_np,
    "variation_scan_sparse": _variation_scan_sparse_np,
    "complement_min_dist": _complement_min_dist_np,
    "element_mesh": _element_mesh_np,
}


# ---------------------------------------------------------------- numba ---

def _build_numba_impl():
    from numba import njit

    @njit(cache=True)
    def floyd_warshall(d):
        n = d.shape[0]
        for k in range(n):
            for i in range(n):
                dik = d[i, k]
                for j in range(n):
                    alt = dik + d[k, j]
                    if alt < d[i, j]:
                        d[i, j] = alt
        return d

    @njit(cache=True)
    def lipschitz_scan(w, d, lam, c):
        n, m = w.shape
        excess = -np.inf
        ei = ej = -1
        lam_hat = 0.0
        hi = hj = -1
        for i in range(n - 1):
            for j in range(i + 1, n):
                l1 = 0.0
                for k in range(m):
                    l1 += abs(w[i, k] - w[j, k])
                dij = d[i, j]
                ex = l1 - lam * dij - c
                if ex > excess:
                    excess, ei, ej = ex, i, j
                if dij > 0.0:
                    cand = (l1 - c) / dij
                elif l1 > c:
                    cand = np.inf
                else:
                    cand = 0.0
                if cand > lam_hat:
                    lam_hat, hi, hj = cand, i, j
        return excess, ei, ej, lam_hat, hi, hj

    @njit(cache=True)
    def variation_scan(w, d, r):
        n, m = w.shape
        best = -np.inf
        bi = bj = -1
        for i in range(n - 1):
            for j in range(i + 1, n):
                if d[i, j] <= r:
                    l1 = 0.0
                    for k in range(m):
                        l1 += abs(w[i, k] - w[j, k])
                    if l1 > best:
                        best, bi, bj = l1, i, j
        return best, bi, bj

    @njit(cache=True)
    def sparse_l1(indptr, indices, data, i, j):
        a, a_end = indptr[i], indptr[i + 1]
        b, b_end = indptr[j], indptr[j + 1]
        total = 0.0
        while a < a_end and b < b_end:
            va, vb = indices[a], indices[b]
            if va == vb:
                total += abs(data[a] - data[b])
                a += 1
                b += 1
            elif va < vb:
                total += abs(data[a])
                a += 1
            else:
                total += abs(data[b])
                b += 1
        while a < a_end:
            total += abs(data[a])
            a += 1
        while b < b_end:
            total += abs(data[b])
            b += 1
        return total

    @njit(cache=True)
    def lipschitz_scan_sparse(indptr, indices, data, nverts, d, lam, c):
        n = indptr.shape[0] - 1
        excess = -np.inf
        ei = ej = -1
        lam_hat = 0.0
        hi = hj = -1
        for i in range(n - 1):
            for j in range(i + 1, n):
                l1 = sparse_l1(indptr, indices, data, i, j)
                dij = d[i, j]
                ex = l1 - lam * dij - c
                if ex > excess:
                    excess, ei, ej = ex, i, j
                if dij > 0.0:
                    cand = (l1 - c) / dij
                elif l1 > c:
                    cand = np.inf
                else:
                    cand = 0.0
                if cand > lam_hat:
                    lam_hat, hi, hj = cand, i, j
        return excess, ei, ej, lam_hat, hi, hj

    @njit(cache=True)
    def variation_scan_sparse(indptr, indices, data, nverts, d, r):
        n = indptr.shape[0] - 1
        best = -np.inf
        bi = bj = -1
        for i in range(n - 1):
            for j in range(i + 1, n):
                if d[i, j] <= r:
                    l1 = sparse_l1(indptr, indices, data, i, j)
                    if l1 > best:
                        best, bi, bj = l1, i, j
        return best, bi, bj

    @njit(cache=True)
    def complement_min_dist(d, member):
        n = d.shape[0]
        m = member.shape[1]
        out = np.zeros((n, m))
        for s in range(m):
            empty_comp = True
            for y in range(n):
                if not member[y, s]:
                    empty_comp = False
                    break
            if empty_comp:
                for x in range(n):
                    out[x, s] = np.inf
                continue
            for x in range(n):
                if member[x, s]:
                    best = np.inf
                    for y in range(n):
                        if not member[y, s] and d[x, y] < best:
                            best = d[x, y]
                    out[x, s] = best
        return out

    @njit(cache=True)
    def element_mesh(d, member):
        n = d.shape[0]
        m = member.shape[1]
        out = np.zeros(m)
        for s in range(m):
            worst = 0.0
            for x in range(n):
                if member[x, s]:
                    for y in range(x + 1, n):
                        if member[y, s] and d[x, y] > worst:
                            worst = d[x, y]
            out[s] = worst
        return out

    return {
        "floyd_warshall": floyd_warshall,
        "lipschitz_scan": lipschitz_scan,
        "variation_scan": variation_scan,
        "lipschitz_scan_sparse": lipschitz_scan_sparse,
        "variation_scan_sparse": variation_scan_sparse,
        "complement_min_dist": complement_min_dist,
        "element_mesh": element_mesh,
    }


# ------------------------------------------------------------- dispatch ---

_impl = _NUMPY_IMPL
_backend = "numpy"


def set_backend(name: str) -> str:
    """Select 'numba' or 'numpy'.  Returns the backend actually in use
    ('numpy' when numba is requested but unavailable)."""
    global _impl, _backend
    if name == "numba":
        try:
            _impl = _build_numba_impl()
            _backend = "numba"
        except ImportError:
            _impl = _NUMPY_IMPL
            _backend = "numpy"
    elif name == "numpy":
        _impl = _NUMPY_IMPL
        _backend = "numpy"
    else:
        raise ValueError(f"unknown backend {name!r}")
    return _backend


def backend_name() -> str:
    return _backend


set_backend(os.environ.get("COARSESCOPE_BACKEND", "numba"))


def floyd_warshall(d: np.ndarray) -> np.ndarray:
    return _impl["floyd_warshall"](np.ascontiguousarray(d, dtype=np.float64))


def lipschitz_scan(w: np.ndarray, d: np.ndarray, lam: float, c: float):
    return _impl["lipschitz_scan"](
        np.ascontiguousarray(w, dtype=np.float64),
        np.ascontiguousarray(d, dtype=np.float64),
        float(lam),
        float(c),
    )


def variation_scan(w: np.ndarray, d: np.ndarray, r: float):
    return _impl["variation_scan"](
        np.ascontiguousarray(w, dtype=np.float64),
        np.ascontiguousarray(d, dtype=np.float64),
        float(r),
    )


def lipschitz_scan_sparse(indptr, indices, data, nverts: int, d: np.ndarray, lam: float, c: float):
    return _impl["lipschitz_scan_sparse"](
        np.ascontiguousarray(indptr, dtype=np.int64),
        np.ascontiguousarray(indices, dtype=np.int64),
        np.ascontiguousarray(data, dtype=np.float64),
        int(nverts),
        np.ascontiguousarray(d, dtype=np.float64),
        float(lam),
        float(c),
    )


def variation_scan_sparse(indptr, indices, data, nverts: int, d: np.ndarray, r: float):
    return _impl["variation_scan_sparse"](
        np.ascontiguousarray(indptr, dtype=np.int64),
        np.ascontiguousarray(indices, dtype=np.int64),
        np.ascontiguousarray(data, dtype=np.float64),
        int(nverts),
        np.ascontiguousarray(d, dtype=np.float64),
        float(r),
    )


def complement_min_dist(d: np.ndarray, member: np.ndarray) -> np.ndarray:
    return _impl["complement_min_dist"](
        np.ascontiguousarray(d, dtype=np.float64),
        np.ascontiguousarray(member, dtype=np.bool_),
    )


def element_mesh(d: np.ndarray, member: np.ndarray) -> np.ndarray:
    return _impl["element_mesh"](
        np.ascontiguousarray(d, dtype=np.float64),
        np.ascontiguousarray(member, dtype=np.bool_),
    )
