"""Compare the numba and numpy kernel backends on representative sizes.

Usage: python benchmarks/bench_kernels.py [--points N] [--vertices V]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from coarsescope import _kernels


def _timeit(fn, *args, repeat: int = 3) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=400)
    ap.add_argument("--vertices", type=int, default=24)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    n, m = args.points, args.vertices
    coords = rng.uniform(0, 50, (n, 1))
    d = np.abs(coords - coords.T)
    w = rng.dirichlet(np.ones(m), size=n)
    member = rng.random((n, max(m, 4))) < 0.3
    member[np.arange(n), rng.integers(0, member.shape[1], n)] = True

    cases = [
        ("floyd_warshall", _kernels.floyd_warshall, (d.copy(),)),
        ("lipschitz_scan", _kernels.lipschitz_scan, (w, d, 0.1, 0.0)),
        ("variation_scan", _kernels.variation_scan, (w, d, 5.0)),
        ("complement_min_dist", _kernels.complement_min_dist, (d, member)),
        ("element_mesh", _kernels.element_mesh, (d, member)),
    ]

    print(f"points={n} vertices={m}")
    print(f"{'kernel':<22}{'numba (s)':>12}{'numpy (s)':>12}{'speedup':>10}")
    for name, fn, fnargs in cases:
        _kernels.set_backend("numba")
        if _kernels.backend_name() != "numba":
            print(f"{name:<22}{'unavailable':>12}")
            continue
        fn(*fnargs)  # warm the JIT before timing
        t_nb = _timeit(fn, *fnargs)
        _kernels.set_backend("numpy")
        t_np = _timeit(fn, *fnargs)
        print(f"{name:<22}{t_nb:>12.5f}{t_np:>12.5f}{t_np / t_nb:>10.1f}x")
    _kernels.set_backend("numba")


if __name__ == "__main__":
    main()
