"""Indexed covers of a finite metric space and their exact statistics.

A cover keeps the member-distance table f_s(x) = dist(x, X \\ U_s) (with
dist to the empty set = +inf), from which local/global Lebesgue numbers,
multiplicities and mesh are computed exhaustively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import CoarseScopeError, require
from .metric_space import INF, FiniteMetricSpace, PointSet

__all__ = [
    "Cover",
    "CoverStats",
    "member_distance",
    "stats",
    "brick_cover",
    "brick_mesh_bound",
    "greedy_cover",
    "GreedyResult",
]


@dataclass(frozen=True)
class Cover:
    space: FiniteMetricSpace
    elements: dict[str, frozenset[str]]
    label: str = ""
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        # drop empty elements, keep insertion order
        kept = {s: frozenset(m) for s, m in self.elements.items() if m}
        object.__setattr__(self, "elements", kept)
        covered: set[str] = set()
        for m in kept.values():
            for p in m:
                self.space.index(p)
            covered |= m
        missing = set(self.space.ids) - covered
        if missing:
            raise CoarseScopeError("NOT_A_COVER", "point not covered by any element", sorted(missing)[0])

    @property
    def index_set(self) -> list[str]:
        return list(self.elements)

    def member_mask(self) -> np.ndarray:
        """(N, |S|) boolean membership matrix, columns in index order."""
        if "mask" not in self._cache:
            n = len(self.space)
            mask = np.zeros((n, len(self.elements)), dtype=bool)
            for j, members in enumerate(self.elements.values()):
                for p in members:
                    mask[self.space.index(p), j] = True
            self._cache["mask"] = mask
        return self._cache["mask"]

    def member_distances(self) -> np.ndarray:
        """(N, |S|) table of f_s(x) = dist(x, X \\ U_s)."""
        if "fs" not in self._cache:
            self._cache["fs"] = _kernels.complement_min_dist(self.space.d, self.member_mask())
        return self._cache["fs"]

    def element(self, s: str) -> PointSet:
        if s not in self.elements:
            raise CoarseScopeError("UNKNOWN_INDEX", f"no cover element {s!r}")
        return PointSet(self.space, self.elements[s])


@dataclass(frozen=True)
class CoverStats:
    lebesgue: float
    multiplicity: int
    mesh: float
    per_point_local_lebesgue: dict[str, float]
    per_point_multiplicity: dict[str, int]

    def to_dict(self) -> dict:
        return {
            "lebesgue": self.lebesgue,
            "multiplicity": self.multiplicity,
            "mesh": self.mesh,
            "per_point_local_lebesgue": dict(self.per_point_local_lebesgue),
            "per_point_multiplicity": dict(self.per_point_multiplicity),
        }


def member_distance(cover: Cover, s: str, x: str) -> float:
    """f_s(x); positive iff x is a member of U_s, +inf when U_s = X."""
    if s not in cover.elements:
        raise CoarseScopeError("UNKNOWN_INDEX", f"no cover element {s!r}")
    j = cover.index_set.index(s)
    return float(cover.member_distances()[cover.space.index(x), j])


def stats(cover: Cover) -> CoverStats:
    """Exact Lebesgue number, multiplicity and mesh via exhaustive scan."""
    if "stats" in cover._cache:
        return cover._cache["stats"]
    fs = cover.member_distances()
    local_leb = fs.max(axis=1)
    local_mult = (fs > 0).sum(axis=1)
    mesh = _kernels.element_mesh(cover.space.d, cover.member_mask())
    result = CoverStats(
        lebesgue=float(local_leb.min()),
        multiplicity=int(local_mult.max()),
        mesh=float(mesh.max()) if mesh.size else 0.0,
        per_point_local_lebesgue={p: float(local_leb[i]) for i, p in enumerate(cover.space.ids)},
        per_point_multiplicity={p: int(local_mult[i]) for i, p in enumerate(cover.space.ids)},
    )
    cover._cache["stats"] = result
    return result


def brick_mesh_bound(r: float, n: int) -> float:
    """Ambient diameter bound of one brick: side 2(n+1)R, diagonal factor sqrt(n)."""
    return 2.0 * (n + 1) * r * math.sqrt(max(n, 1))


def brick_cover(space: FiniteMetricSpace, r: float, n: int) -> Cover:
    """Shifted-brick cover: n+1 interleaved lattices of half-open axis-aligned
    boxes of side 2(n+1)R, each family diagonally shifted by 2R.

    Every ambient point sits >= R deep inside some box, so the restriction to
    the point set has Lebesgue >= R; each family is a partition, so the
    multiplicity is at most n+1.  Both are re-verified a posteriori by stats().
    """
    require(space.coords is not None, "NOT_EUCLIDEAN", "brick_cover needs a Euclidean-sourced space")
    coords = space.coords
    require(coords.shape[1] == n, "NOT_EUCLIDEAN", f"space has ambient dimension {coords.shape[1]}, not {n}")
    require(r > 0, "BAD_PARAMETER", "R must be positive")
    side = 2.0 * (n + 1) * r
    elements: dict[str, set[str]] = {}
    for fam in range(n + 1):
        shift = 2.0 * fam * r
        cells = np.floor((coords - shift) / side).astype(np.int64)
        for i, p in enumerate(space.ids):
            key = f"b{fam}:" + ",".join(str(c) for c in cells[i])
            elements.setdefault(key, set()).add(p)
    ordered = {k: frozenset(v) for k, v in sorted(elements.items())}
    return Cover(space, ordered, label=f"brick(R={r}, n={n})")


@dataclass(frozen=True)
class GreedyResult:
    ok: bool
    cover: Cover
    multiplicity: int
    lebesgue: float


def greedy_cover(space: FiniteMetricSpace, r: float, target_mult: int) -> GreedyResult:
    """Greedy witness generator: walk points in id order, drop an open ball
    of radius 2R on each point not yet covered.  Success iff the measured
    stats give Lebesgue >= R and multiplicity <= target_mult; otherwise the
    result carries the best (measured) multiplicity.  Fully deterministic.
    """
    require(r > 0, "BAD_PARAMETER", "R must be positive")
    require(target_mult >= 1, "BAD_PARAMETER", "target_mult must be >= 1")
    covered = np.zeros(len(space), dtype=bool)
    elements: dict[str, frozenset[str]] = {}
    for i, p in enumerate(space.ids):
        if covered[i]:
            continue
        sel = np.nonzero(space.d[i] < 2.0 * r)[0]
        covered[sel] = True
        elements[f"g{len(elements)}"] = frozenset(space.ids[j] for j in sel)
    cover = Cover(space, elements, label=f"greedy(R={r})")
    st = stats(cover)
    ok = st.multiplicity <= target_mult and st.lebesgue >= r
    return GreedyResult(ok=ok, cover=cover, multiplicity=st.multiplicity, lebesgue=st.lebesgue)
