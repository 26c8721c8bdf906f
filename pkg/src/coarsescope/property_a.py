"""Property A certificates: set families {A_x}, the C_x case-split
construction, the induced partition of unity f_x, and the quantitative
equivalence with delta-partitions of unity.

Family entries are (point, depth) pairs with positive integer depth; the
first coordinates of A_x live in the OPEN ball B(x, S).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import get_tol
from .errors import CoarseScopeError, require
from .metric_space import INF, FiniteMetricSpace, ball, r_components
from .pu_maps import DeltaPUCertificate, PUMap, check_delta_pu, star_preimage_cover
from .covers import stats
from .simplicial import Complex, SimplexPoint

__all__ = [
    "SetFamily",
    "PropertyAInput",
    "symdiff_ratio",
    "ball_family",
    "worst_ratio",
    "CxResult",
    "build_cx",
    "CxPartitionResult",
    "cx_partition",
    "property_a_to_pu",
    "pu_to_property_a",
    "PropertyAData",
]

Entry = tuple[str, int]


@dataclass(frozen=True)
class SetFamily:
    space: FiniteMetricSpace
    s_radius: float
    sets: dict[str, frozenset[Entry]]

    def __post_init__(self):
        for x in self.space.ids:
            a_x = self.sets.get(x)
            require(a_x is not None and len(a_x) > 0, "BAD_DOCUMENT", f"A_x missing or empty at {x!r}", x)
            for (y, i) in a_x:
                require(i >= 1, "BAD_DOCUMENT", f"depth {i} at {x!r} is not a positive integer", (x, y, i))
                d = self.space.dist(x, y)
                require(d < self.s_radius, "BAD_DOCUMENT", f"entry {y!r} at distance {d} not inside B({x!r}, {self.s_radius})", (x, y))


@dataclass(frozen=True)
class PropertyAInput:
    R: float
    eps: float
    M: int
    delta: float

    def __post_init__(self):
        require(self.M >= 2, "PARAMETER_CONSTRAINT_FAILED", "M must be >= 2")
        require(0.0 < self.delta < 1.0, "PARAMETER_CONSTRAINT_FAILED", "delta must lie in (0, 1)")


def symdiff_ratio(family: SetFamily, x: str, y: str) -> float:
    """|A_x symdiff A_y| / |A_x intersect A_y|; +inf on empty intersection."""
    a, b = family.sets[x], family.sets[y]
    inter = len(a & b)
    if inter == 0:
        return INF
    return len(a ^ b) / inter


def ball_family(space: FiniteMetricSpace, s: float, depth: int) -> SetFamily:
    """A_x = B(x, S) x {1..depth} (open balls)."""
    require(s > 0, "BAD_PARAMETER", "S must be positive")
    require(depth >= 1, "BAD_PARAMETER", "depth must be >= 1")
    sets = {}
    for x in space.ids:
        members = ball(space, x, s).members
        sets[x] = frozenset((y, i) for y in members for i in range(1, depth + 1))
    return SetFamily(space, s, sets)


def worst_ratio(family: SetFamily, r: float) -> tuple[float, tuple[str, str] | None]:
    """Max symdiff ratio over unordered pairs with d(x, y) <= R."""
    space = family.space
    worst, pair = 0.0, None
    ii, jj = np.nonzero(np.triu(space.d <= r, k=1))
    for i, j in zip(ii, jj):
        x, y = space.ids[int(i)], space.ids[int(j)]
        ratio = symdiff_ratio(family, x, y)
        if ratio > worst:
            worst, pair = ratio, (x, y)
    return worst, pair


@dataclass(frozen=True)
class CxResult:
    cx: dict[str, frozenset[Entry]]
    case: dict[str, str]  # "large" | "small"
    small_pairs_equal_ok: bool
    small_component_bounded_ok: bool
    large_ratio_ok: bool  # |C_x symdiff C_y| / |C_x| < delta/3 on large pairs

    @property
    def verdict(self) -> bool:
        return self.small_pairs_equal_ok and self.small_component_bounded_ok and self.large_ratio_ok

    def to_dict(self) -> dict:
        return {
            "cases": {"large": sum(1 for c in self.case.values() if c == "large"), "small": sum(1 for c in self.case.values() if c == "small")},
            "small_pairs_equal_ok": self.small_pairs_equal_ok,
            "small_component_bounded_ok": self.small_component_bounded_ok,
            "large_ratio_ok": self.large_ratio_ok,
            "verdict": self.verdict,
        }


def build_cx(family: SetFamily, params: PropertyAInput) -> CxResult:
    """C_x = A_x union B(x, 1/delta) x {1} when |A_x| >= 8M/delta, otherwise
    the R-component of x times {1}.  Scans every stated precondition and
    re-verifies the two case claims on the concrete input."""
    space = family.space
    delta, m, r, s = params.delta, params.M, params.R, family.s_radius
    tol = get_tol()

    if not (r > (2.0 - delta) / delta + m):
        raise CoarseScopeError("PARAMETER_CONSTRAINT_FAILED", f"need R > (2-delta)/delta + M = {(2.0 - delta) / delta + m}, got R={r}")
    if not (s > m + 1.0 / delta):
        raise CoarseScopeError("PARAMETER_CONSTRAINT_FAILED", f"need S > M + 1/delta = {m + 1.0 / delta}, got S={s}")
    inv_delta = 1.0 / delta
    for x in space.ids:
        b = ball(space, x, inv_delta)
        if len(b) > m:
            raise CoarseScopeError("BALL_TOO_BIG", f"ball({x!r}, 1/delta) has {len(b)} > M = {m} points", x)

    bound = delta / (8.0 * m)
    ratio, pair = worst_ratio(family, r)
    if ratio >= bound:
        raise CoarseScopeError("RATIO_PRECONDITION_FAILED", f"symdiff ratio {ratio} >= delta/(8M) = {bound}", pair)

    threshold = 8.0 * m / delta
    comp_of: dict[str, frozenset[str]] = {}
    for comp in r_components(space, r):
        for x in comp.members:
            comp_of[x] = comp.members

    cx: dict[str, frozenset[Entry]] = {}
    case: dict[str, str] = {}
    for x in space.ids:
        if len(family.sets[x]) >= threshold:
            case[x] = "large"
            extra = frozenset((y, 1) for y in ball(space, x, inv_delta).members)
            cx[x] = family.sets[x] | extra
        else:
            case[x] = "small"
            cx[x] = frozenset((y, 1) for y in comp_of[x])

    # re-verify the proof's two case claims on this input
    small_equal = True
    large_ratio = True
    ii, jj = np.nonzero(np.triu(space.d <= r, k=1))
    for i, j in zip(ii, jj):
        x, y = space.ids[int(i)], space.ids[int(j)]
        if case[x] == "small" or case[y] == "small":
            if family.sets[x] != family.sets[y]:
                small_equal = False
        else:
            cxs, cys = cx[x], cx[y]
            if len(cxs ^ cys) / len(cxs) >= delta / 3.0 + tol:
                large_ratio = False
    small_bounded = all(
        case[x] != "small" or all(space.dist(x, y) < 2.0 * s for y in comp_of[x]) for x in space.ids
    )
    return CxResult(cx, case, small_equal, small_bounded, large_ratio)


@dataclass(frozen=True)
class CxPartitionResult:
    pumap: PUMap
    scaled_l1_ok: bool  # || |C_x| f_x - |C_y| f_y ||_1 <= |C_x symdiff C_y|
    size_ratio_ok: bool  # |C_x|/|C_y| - 1 <= delta/3 (oriented)
    final_l1_ok: bool  # ||f_x - f_y||_1 < delta for d <= R
    checked_pairs: int

    @property
    def verdict(self) -> bool:
        return self.scaled_l1_ok and self.size_ratio_ok and self.final_l1_ok

    def to_dict(self) -> dict:
        return {
            "scaled_l1_ok": self.scaled_l1_ok,
            "size_ratio_ok": self.size_ratio_ok,
            "final_l1_ok": self.final_l1_ok,
            "checked_pairs": self.checked_pairs,
            "verdict": self.verdict,
        }


def cx_partition(cx: dict[str, frozenset[Entry]], space: FiniteMetricSpace, params: PropertyAInput | None = None) -> CxPartitionResult:
    """f_x(z) = |({z} x N) intersect C_x| / |C_x|, read as the map
    x -> f_x into the full simplex on the point set itself.

    With params supplied, every link of the proof chain is re-checked on
    all pairs at distance <= R.
    """
    tol = get_tol()
    counts: dict[str, dict[str, int]] = {}
    for x in space.ids:
        c = cx.get(x)
        if not c:
            raise CoarseScopeError("EMPTY_CX", f"C_x empty or missing at {x!r}", x)
        per: dict[str, int] = {}
        for (z, _i) in c:
            if z not in space._index:
                raise CoarseScopeError("FOREIGN_POINT", f"C_x at {x!r} mentions {z!r} outside the space", (x, z))
            per[z] = per.get(z, 0) + 1
        counts[x] = per

    values = {x: SimplexPoint({z: k / len(cx[x]) for z, k in counts[x].items()}) for x in space.ids}
    target = Complex.from_simplices(space.ids, (frozenset(counts[x]) for x in space.ids))
    pumap = PUMap(space, target, values)

    scaled_ok = size_ok = final_ok = True
    checked = 0
    if params is not None:
        ii, jj = np.nonzero(np.triu(space.d <= params.R, k=1))
        for i, j in zip(ii, jj):
            x, y = space.ids[int(i)], space.ids[int(j)]
            checked += 1
            nx, ny = len(cx[x]), len(cx[y])
            verts = set(counts[x]) | set(counts[y])
            scaled = sum(abs(counts[x].get(z, 0) - counts[y].get(z, 0)) for z in verts)
            if scaled > len(cx[x] ^ cx[y]) + tol:
                scaled_ok = False
            big, small = (nx, ny) if nx >= ny else (ny, nx)
            if big / small - 1.0 > params.delta / 3.0 + tol:
                size_ok = False
            l1 = sum(abs(counts[x].get(z, 0) / nx - counts[y].get(z, 0) / ny) for z in verts)
            if not (l1 < params.delta + tol):
                final_ok = False
    return CxPartitionResult(pumap, scaled_ok, size_ok, final_ok, checked)


def property_a_to_pu(phi: PUMap, r: float, eps: float, m_support: float) -> DeltaPUCertificate:
    """Forward direction: a Property A partition of unity at (R, eps) with
    supports of diameter <= m_support certifies as a delta-PU, delta = 2/R.
    """
    require(r > 0, "BAD_PARAMETER", "R must be positive")
    tol = get_tol()
    cover = star_preimage_cover(phi)
    mesh = stats(cover).mesh
    if mesh > m_support + tol:
        raise CoarseScopeError("SUPPORT_TOO_BIG", f"a support has diameter {mesh} > {m_support}")
    from .pu_maps import check_variation

    var = check_variation(phi, r, eps)
    if not var.ok:
        raise CoarseScopeError("VARIATION_FAILED", f"max l1 {var.max_l1} at distance <= R", var.worst_pair)
    return check_delta_pu(phi, 2.0 / r, m_support)


@dataclass(frozen=True)
class PropertyAData:
    R: float
    eps: float
    delta: float
    support_bound: float
    variation_ok: bool

    def to_dict(self) -> dict:
        return {
            "R": self.R,
            "eps": self.eps,
            "delta": self.delta,
            "support_bound": self.support_bound,
            "variation_ok": self.variation_ok,
        }


def pu_to_property_a(f: PUMap, r: float, eps: float) -> PropertyAData:
    """Reverse direction: from a delta-PU with delta = eps/(R+1), produce
    (R, eps) Property A data; supports are bounded by the star mesh."""
    require(r > 0 and eps > 0, "BAD_PARAMETER", "R and eps must be positive")
    delta = eps / (r + 1.0)
    from .pu_maps import check_variation

    var = check_variation(f, r, eps)  # delta*R + delta = eps
    mesh = stats(star_preimage_cover(f)).mesh
    return PropertyAData(R=r, eps=eps, delta=delta, support_bound=mesh, variation_ok=var.ok)
