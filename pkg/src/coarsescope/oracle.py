"""Independent brute-force reference implementations.

Everything here is deliberately written from scratch against the plain
definitions, using only the standard library: no numpy, no imports from the
rest of the package.  Tests and the `oracle` CLI subcommand diff these
against the main path.

Inputs are plain python values: distance matrices as lists of lists,
covers as {index: set of point positions}, simplex points as {vertex: weight}.
"""

from __future__ import annotations

import math

__all__ = [
    "oracle_floyd_warshall",
    "oracle_complement_distance",
    "oracle_cover_stats",
    "oracle_l1",
    "oracle_barycentric",
    "oracle_lambda_hat",
    "oracle_max_variation",
    "oracle_normalize",
    "oracle_fold",
    "oracle_push",
]

INF = math.inf


def oracle_floyd_warshall(dist: list[list[float]]) -> list[list[float]]:
    """Textbook triple loop on a copy of the matrix."""
    n = len(dist)
    d = [row[:] for row in dist]
    for k in range(n):
        for i in range(n):
            dik = d[i][k]
            if dik == INF:
                continue
            for j in range(n):
                alt = dik + d[k][j]
                if alt < d[i][j]:
                    d[i][j] = alt
    return d


def oracle_complement_distance(dist: list[list[float]], members: set[int]) -> list[float]:
    """f(x) = min distance from x to any point outside the element; +inf when
    the element is everything."""
    n = len(dist)
    out = []
    for i in range(n):
        if i not in members:
            out.append(0.0)
            continue
        best = INF
        for j in range(n):
            if j not in members and dist[i][j] < best:
                best = dist[i][j]
        out.append(best)
    return out


def oracle_cover_stats(dist: list[list[float]], elements: dict[str, set[int]]) -> tuple[float, int, float]:
    """(lebesgue, multiplicity, mesh) by exhaustive definition-chasing."""
    n = len(dist)
    fs = {s: oracle_complement_distance(dist, m) for s, m in elements.items()}
    lebesgue = min(max(fs[s][i] for s in elements) for i in range(n)) if n else INF
    mult = max(sum(1 for s in elements if fs[s][i] > 0) for i in range(n)) if n else 0
    mesh = 0.0
    for m in elements.values():
        for i in m:
            for j in m:
                if dist[i][j] > mesh:
                    mesh = dist[i][j]
    return lebesgue, mult, mesh


def oracle_l1(p: dict[str, float], q: dict[str, float]) -> float:
    total = 0.0
    for v in set(p) | set(q):
        total += abs(p.get(v, 0.0) - q.get(v, 0.0))
    return total


def oracle_barycentric(dist: list[list[float]], elements: dict[str, set[int]]) -> list[dict[str, float]]:
    """phi_s(x) = f_s(x) / sum_t f_t(x); ties to +inf handled by sharing mass
    uniformly over the infinite indices."""
    n = len(dist)
    fs = {s: oracle_complement_distance(dist, m) for s, m in elements.items()}
    out = []
    for i in range(n):
        inf_idx = [s for s in elements if fs[s][i] == INF]
        if inf_idx:
            out.append({s: 1.0 / len(inf_idx) for s in inf_idx})
            continue
        total = sum(fs[s][i] for s in elements)
        out.append({s: fs[s][i] / total for s in elements if fs[s][i] > 0})
    return out


def oracle_lambda_hat(values: list[dict[str, float]], dist: list[list[float]], c: float = 0.0) -> float:
    """Smallest lambda with ||f(x)-f(y)||_1 <= lambda*d + c over all pairs."""
    n = len(values)
    lam = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            d = dist[i][j]
            if d <= 0 or d == INF:
                continue
            need = (oracle_l1(values[i], values[j]) - c) / d
            if need > lam:
                lam = need
    return lam


def oracle_max_variation(values: list[dict[str, float]], dist: list[list[float]], r: float) -> float:
    n = len(values)
    worst = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            if dist[i][j] <= r:
                worst = max(worst, oracle_l1(values[i], values[j]))
    return worst


def oracle_normalize(weights: dict[str, float], tol: float = 1e-9) -> dict[str, float]:
    """Mirror of the simplex-point cleanup: drop non-positive entries, then
    renormalize when the total is within tol of 1 but not exactly 1."""
    cleaned = {}
    for v, w in weights.items():
        if w > 0:
            cleaned[v] = float(w)
    total = sum(cleaned.values())
    if abs(total - 1.0) > tol:
        raise ValueError(f"weights sum to {total}")
    if total != 1.0:
        cleaned = {v: w / total for v, w in cleaned.items()}
    return cleaned


def oracle_fold(weights: dict[str, float], n: int, tol: float = 1e-9) -> dict[str, float]:
    """Keep the n+1 heaviest vertices (ties broken by vertex id ascending),
    fold the remaining mass onto the heaviest."""
    order = sorted(weights.items(), key=lambda kv: (-kv[1], kv[0]))
    if len(order) <= n + 1:
        return dict(weights)
    tail = sum(w for _, w in order[n + 1 :])
    kept = dict(order[: n + 1])
    top = order[0][0]
    kept[top] = kept[top] + tail
    return oracle_normalize(kept, tol)


def oracle_push(values: list[dict[str, float]], n: int, tol: float = 1e-9) -> list[dict[str, float]]:
    return [oracle_fold(p, n, tol) for p in values]
