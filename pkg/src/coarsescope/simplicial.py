"""l1 simplicial complexes: sparse probability vectors, stars, carriers,
skeleta, and the nerve of a cover.

A complex is stored as its list of maximal simplices; downward closure is
implied and membership queries test subset-of-maximal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

from .config import get_tol
from .errors import CoarseScopeError, require
from .covers import Cover

__all__ = [
    "SimplexPoint",
    "Complex",
    "l1_dist",
    "star_membership",
    "carrier",
    "in_skeleton",
    "nerve",
]


@dataclass(frozen=True)
class SimplexPoint:
    weights: dict[str, float]

    def __post_init__(self):
        tol = get_tol()
        cleaned = {}
        for v, w in self.weights.items():
            require(w >= -tol, "NEGATIVE_WEIGHT", f"negative weight at vertex {v!r}", v)
            if w > 0:
                cleaned[str(v)] = float(w)
        total = sum(cleaned.values())
        require(abs(total - 1.0) <= tol, "NOT_NORMALIZED", f"weights sum to {total}, not 1")
        if total != 1.0:
            cleaned = {v: w / total for v, w in cleaned.items()}
        object.__setattr__(self, "weights", cleaned)

    def __call__(self, v: str) -> float:
        return self.weights.get(v, 0.0)

    @classmethod
    def delta(cls, v: str) -> "SimplexPoint":
        return cls({v: 1.0})

    def support(self) -> frozenset[str]:
        return frozenset(self.weights)


def l1_dist(p: SimplexPoint, q: SimplexPoint) -> float:
    verts = set(p.weights) | set(q.weights)
    return sum(abs(p(v) - q(v)) for v in verts)


def star_membership(p: SimplexPoint, v: str) -> bool:
    """p lies in st(v) iff its weight at v is strictly positive."""
    return p(v) > 0.0


def carrier(p: SimplexPoint) -> frozenset[str]:
    """The support of p = the minimal simplex containing it."""
    return p.support()


def in_skeleton(p: SimplexPoint, n: int) -> bool:
    require(n >= 0, "BAD_PARAMETER", "skeleton index must be >= 0")
    return len(p.weights) <= n + 1


@dataclass(frozen=True)
class Complex:
    vertices: frozenset[str]
    maximal_simplices: tuple[frozenset[str], ...]
    ambient: frozenset[str] | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        for m in self.maximal_simplices:
            bad = m - self.vertices
            require(not bad, "BAD_DOCUMENT", "simplex uses unknown vertex", sorted(bad)[0] if bad else None)
        uncovered = self.vertices - frozenset().union(*self.maximal_simplices) if self.maximal_simplices else self.vertices
        require(not uncovered, "BAD_DOCUMENT", "vertex not in any maximal simplex", sorted(uncovered)[0] if uncovered else None)

    @classmethod
    def from_simplices(cls, vertices: Iterable[str], simplices: Iterable[Iterable[str]], ambient: Iterable[str] | None = None) -> "Complex":
        verts = frozenset(str(v) for v in vertices)
        sims = set(frozenset(str(v) for v in s) for s in simplices)
        sims |= {frozenset([v]) for v in verts}
        sims.discard(frozenset())
        gens = sorted(sims, key=lambda s: sorted(s))
        if len(gens) <= 200:  # minimal representation only when cheap
            gens = [s for s in gens if not any(s < t for t in gens)]
        return cls(verts, tuple(gens), frozenset(str(v) for v in ambient) if ambient is not None else None)

    @classmethod
    def skeleton_of_full(cls, vertices: Iterable[str], n: int) -> "Complex":
        """n-skeleton of the full simplex on the given vertices."""
        verts = sorted(str(v) for v in vertices)
        k = min(n + 1, len(verts))
        return cls(frozenset(verts), tuple(frozenset(c) for c in combinations(verts, k)))

    def has_simplex(self, simplex: Iterable[str]) -> bool:
        s = frozenset(simplex)
        if not s:
            return False
        known = self._cache.setdefault("known", set(self.maximal_simplices))
        if s in known:
            return True
        if any(s <= m for m in self.maximal_simplices):
            known.add(s)
            return True
        return False

    def dimension(self) -> int:
        return max((len(m) for m in self.maximal_simplices), default=0) - 1

    def contains_point(self, p: SimplexPoint) -> bool:
        return self.has_simplex(carrier(p))


def nerve(cover: Cover) -> Complex:
    """Nerve of a cover: vertices are the element indices, a finite index set
    is a simplex iff the corresponding elements share a point."""
    index_set = cover.index_set
    memberships: dict[str, frozenset[str]] = {}
    for x in cover.space.ids:
        t = frozenset(s for s in index_set if x in cover.elements[s])
        memberships[x] = t
    return Complex.from_simplices(index_set, memberships.values())
