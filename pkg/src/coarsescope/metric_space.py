"""Finite metric spaces: loading, balls, neighborhoods, R-components.

Point identifiers are strings (coerced on load).  Balls are OPEN,
``{y : d(center, y) < radius}``; R-chains use the CLOSED threshold
``d <= R``.  Distance to the empty set is +inf.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from . import _kernels
from .config import get_tol
from .errors import CoarseScopeError, require

INF = float("inf")


@dataclass(frozen=True)
class FiniteMetricSpace:
    ids: tuple[str, ...]
    d: np.ndarray  # (N, N) float64, symmetric, zero diagonal
    coords: np.ndarray | None = None  # set for Euclidean-sourced spaces
    _index: dict[str, int] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {p: i for i, p in enumerate(self.ids)})
        self.d.setflags(write=False)

    def __len__(self) -> int:
        return len(self.ids)

    def index(self, point: str) -> int:
        try:
            return self._index[point]
        except KeyError:
            raise CoarseScopeError("UNKNOWN_POINT", f"point {point!r} not in space") from None

    def dist(self, x: str, y: str) -> float:
        return float(self.d[self.index(x), self.index(y)])

    def diameter(self) -> float:
        return float(self.d.max()) if len(self) else 0.0

    def set_distance(self, x: str, members: Iterable[str]) -> float:
        """dist(x, A); +inf when A is empty."""
        idx = [self.index(y) for y in members]
        if not idx:
            return INF
        return float(self.d[self.index(x), idx].min())


@dataclass(frozen=True)
class PointSet:
    space: FiniteMetricSpace
    members: frozenset[str]

    def __post_init__(self):
        for p in self.members:
            self.space.index(p)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, p: str) -> bool:
        return p in self.members

    def indices(self) -> np.ndarray:
        return np.array(sorted(self.space.index(p) for p in self.members), dtype=np.int64)

    def sorted_members(self) -> list[str]:
        return sorted(self.members)

    def complement(self) -> "PointSet":
        return PointSet(self.space, frozenset(self.space.ids) - self.members)


def _validate_matrix(ids: Sequence[str], d: np.ndarray, check_triangle: bool = True) -> None:
    tol = get_tol()
    n = len(ids)
    require(d.shape == (n, n), "ASYMMETRIC_MATRIX", f"matrix shape {d.shape} does not match {n} ids")
    bad = np.argwhere(np.abs(d - d.T) > tol)
    if bad.size:
        i, j = map(int, bad[0])
        raise CoarseScopeError("ASYMMETRIC_MATRIX", "distance table is not symmetric", (ids[i], ids[j]))
    bad = np.nonzero(np.abs(np.diag(d)) > tol)[0]
    if bad.size:
        raise CoarseScopeError("NONZERO_DIAGONAL", "dist(x,x) != 0", ids[int(bad[0])])
    bad = np.argwhere(d < -tol)
    if bad.size:
        i, j = map(int, bad[0])
        raise CoarseScopeError("NEGATIVE_DISTANCE", "negative distance", (ids[i], ids[j]))
    if check_triangle:
        for k in range(n):
            viol = d - (d[:, k : k + 1] + d[k : k + 1, :])
            bad = np.argwhere(viol > tol)
            if bad.size:
                i, j = map(int, bad[0])
                raise CoarseScopeError(
                    "TRIANGLE_VIOLATION",
                    f"d({ids[i]},{ids[j]}) > d({ids[i]},{ids[k]}) + d({ids[k]},{ids[j]})",
                    (ids[i], ids[k], ids[j]),
                )


def _check_ids(raw_ids: Sequence[Any]) -> tuple[str, ...]:
    ids = tuple(str(p) for p in raw_ids)
    seen: set[str] = set()
    for p in ids:
        if p in seen:
            raise CoarseScopeError("DUPLICATE_ID", f"duplicate point id {p!r}")
        seen.add(p)
    return ids


def load_space(source: dict) -> FiniteMetricSpace:
    """Build a space from a space document.

    Formats: "matrix" (explicit distance table, triangle-checked),
    "euclidean" (coordinate lists), "graph" (weighted undirected edge
    list, distances = all-pairs shortest path).
    """
    fmt = source.get("format")
    ids = _check_ids(source.get("ids", []))
    data = source.get("data")

    if fmt == "matrix":
        d = np.array(data, dtype=np.float64)
        _validate_matrix(ids, d)
        return FiniteMetricSpace(ids, d)

    if fmt == "euclidean":
        coords = np.array(data, dtype=np.float64)
        require(coords.ndim == 2 and coords.shape[0] == len(ids), "BAD_DOCUMENT", "euclidean data must be a list of coordinate lists, one per id")
        diff = coords[:, None, :] - coords[None, :, :]
        d = np.sqrt((diff * diff).sum(axis=2))
        np.fill_diagonal(d, 0.0)
        # exact Euclidean metric; float error is far below tol
        return FiniteMetricSpace(ids, d, coords=coords)

    if fmt == "graph":
        edges = data.get("edges", []) if isinstance(data, dict) else data
        n = len(ids)
        index = {p: i for i, p in enumerate(ids)}
        d = np.full((n, n), np.inf)
        np.fill_diagonal(d, 0.0)
        for e in edges:
            u, v, w = str(e[0]), str(e[1]), float(e[2])
            require(w >= 0, "NEGATIVE_DISTANCE", f"negative edge weight on ({u},{v})", (u, v))
            for p in (u, v):
                if p not in index:
                    raise CoarseScopeError("UNKNOWN_POINT", f"edge endpoint {p!r} not in ids")
            i, j = index[u], index[v]
            if w < d[i, j]:
                d[i, j] = d[j, i] = w
        d = _kernels.floyd_warshall(d.copy())
        bad = np.argwhere(np.isinf(d))
        if bad.size:
            i, j = map(int, bad[0])
            raise CoarseScopeError("DISCONNECTED_GRAPH", "unreachable pair", (ids[i], ids[j]))
        return FiniteMetricSpace(ids, d)

    raise CoarseScopeError("BAD_DOCUMENT", f"unknown space format {fmt!r}")


def path_graph_space(n: int) -> FiniteMetricSpace:
    """Unit-edge path 0 - 1 - ... - (n-1); ids are zero-padded decimals."""
    width = len(str(n - 1))
    ids = [str(i).zfill(width) for i in range(n)]
    i = np.arange(n)
    d = np.abs(i[:, None] - i[None, :]).astype(np.float64)
    return FiniteMetricSpace(tuple(ids), d)


def line_space(positions: Sequence[float], ids: Sequence[str] | None = None) -> FiniteMetricSpace:
    """1-D Euclidean space from a list of positions."""
    pos = np.asarray(positions, dtype=np.float64)
    if ids is None:
        width = len(str(len(pos) - 1)) if len(pos) else 1
        ids = [str(i).zfill(width) for i in range(len(pos))]
    d = np.abs(pos[:, None] - pos[None, :])
    return FiniteMetricSpace(_check_ids(ids), d, coords=pos[:, None])


def ball(space: FiniteMetricSpace, center: str, radius: float) -> PointSet:
    """Open ball {y : d(center, y) < radius}."""
    require(radius >= 0, "BAD_PARAMETER", "radius must be >= 0")
    row = space.d[space.index(center)]
    sel = np.nonzero(row < radius)[0]
    return PointSet(space, frozenset(space.ids[i] for i in sel))


def neighborhood(a: PointSet, r: float) -> PointSet:
    """B(A, R): union of open balls of radius R around points of A."""
    require(r >= 0, "BAD_PARAMETER", "R must be >= 0")
    space = a.space
    if not a.members:
        return PointSet(space, frozenset())
    idx = a.indices()
    sel = np.nonzero((space.d[idx] < r).any(axis=0))[0]
    return PointSet(space, frozenset(space.ids[i] for i in sel))


def r_components(space: FiniteMetricSpace, r: float) -> list[PointSet]:
    """Partition into R-chain components (closed threshold d <= R),
    ordered by smallest member index."""
    require(r >= 0, "BAD_PARAMETER", "R must be >= 0")
    n = len(space)
    adj = space.d <= r
    label = np.full(n, -1, dtype=np.int64)
    comps: list[PointSet] = []
    for start in range(n):
        if label[start] >= 0:
            continue
        stack = [start]
        label[start] = len(comps)
        members = []
        while stack:
            x = stack.pop()
            members.append(space.ids[x])
            for y in np.nonzero(adj[x])[0]:
                if label[y] < 0:
                    label[int(y)] = len(comps)
                    stack.append(int(y))
        comps.append(PointSet(space, frozenset(members)))
    return comps
