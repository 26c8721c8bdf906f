"""Seeded fixture generators: random spaces, covers and maps for the
property suites, plus the deterministic large interval-lattice builders for
the end-to-end filler and Property A runs.

All randomness flows from a caller-supplied numpy Generator so runs are
reproducible from a single 64-bit seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .covers import Cover, brick_cover, brick_mesh_bound
from .errors import require
from .filler import FillerSchedule, find_schedule
from .metric_space import FiniteMetricSpace, PointSet, line_space, load_space, path_graph_space
from .property_a import PropertyAInput, SetFamily, ball_family
from .pu_maps import PUMap, barycentric_map, measure_variation
from .simplicial import Complex, SimplexPoint
from .skeleton_push import fold_point

__all__ = [
    "random_space",
    "random_cover",
    "random_pumap",
    "PushFixture",
    "random_push_fixture",
    "small_fixture",
    "TheoremAFixture",
    "theorem_a_fixture",
    "PropertyAFixture",
    "property_a_fixture",
]


def _ids(n: int) -> list[str]:
    width = len(str(max(n - 1, 1)))
    return [str(i).zfill(width) for i in range(n)]


def random_space(rng: np.random.Generator, n_points: int, dim: int = 1, box: float = 10.0) -> FiniteMetricSpace:
    coords = rng.uniform(0.0, box, size=(n_points, dim))
    return load_space({"format": "euclidean", "ids": _ids(n_points), "data": coords.tolist()})


def random_cover(rng: np.random.Generator, space: FiniteMetricSpace, max_elements: int = 20) -> Cover:
    """Random open-ball cover with proper elements (none equal to X)."""
    n = len(space)
    d = space.d
    scale = 1.0
    while True:
        elements: dict[str, frozenset[str]] = {}
        covered = np.zeros(n, dtype=bool)

        def drop_ball(i: int):
            radius = float(rng.uniform(1.5, 3.5)) * scale
            members = d[i] < radius
            while members.all() and n > 1:
                radius *= 0.7
                members = d[i] < radius
            elements[f"e{len(elements)}"] = frozenset(space.ids[j] for j in np.nonzero(members)[0])
            covered[members] = True

        for i in rng.choice(n, size=min(4, n), replace=False):
            drop_ball(int(i))
        for i in range(n):
            if not covered[i]:
                drop_ball(i)
        if len(elements) <= max_elements:
            return Cover(space, elements, label="random-balls")
        scale *= 1.4


def random_pumap(rng: np.random.Generator, space: FiniteMetricSpace, n_vertices: int, n_skeleton: int | None = None) -> PUMap:
    """Bump-function map: weight at vertex j falls off with distance to a
    random ambient center; optionally folded into an n-skeleton."""
    require(space.coords is not None, "BAD_PARAMETER", "random_pumap needs a Euclidean-sourced space")
    coords = space.coords
    lo, hi = coords.min(axis=0), coords.max(axis=0)
    centers = rng.uniform(lo, hi, size=(n_vertices, coords.shape[1]))
    rho = float(rng.uniform(2.0, 4.0))
    names = [f"v{j}" for j in range(n_vertices)]
    dist = np.sqrt(((coords[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2))
    bump = np.maximum(0.0, 1.0 - dist / rho) ** 2
    values: dict[str, SimplexPoint] = {}
    for i, p in enumerate(space.ids):
        row = bump[i]
        if row.sum() <= 0:
            values[p] = SimplexPoint.delta(names[int(np.argmin(dist[i]))])
        else:
            values[p] = SimplexPoint({names[j]: row[j] / row.sum() for j in np.nonzero(row > 0)[0]})
    if n_skeleton is not None:
        values = {p: fold_point(v, n_skeleton) for p, v in values.items()}
    target = Complex.from_simplices(names, (v.support() for v in values.values()))
    return PUMap(space, target, values)


@dataclass(frozen=True)
class PushFixture:
    f: PUMap
    a: PointSet
    r: float
    n: int
    eps: float


def random_push_fixture(rng: np.random.Generator, max_points: int = 30) -> PushFixture:
    """(f, A, R, n, eps) with the push preconditions holding by
    construction: f(A) folded into the n-skeleton, eps above the measured
    (R, .) variation."""
    n_points = int(rng.integers(6, max_points + 1))
    space = random_space(rng, n_points, dim=1)
    f0 = random_pumap(rng, space, int(rng.integers(3, 7)))
    n = int(rng.integers(0, 3))
    size = int(rng.integers(1, max(2, n_points // 3)))
    picked = rng.choice(n_points, size=size, replace=False)
    a_members = frozenset(space.ids[int(i)] for i in picked)
    values = dict(f0.values)
    for p in a_members:
        values[p] = fold_point(values[p], n)
    f = PUMap(space, f0.target, values)
    r = float(rng.uniform(0.5, 3.0))
    var = measure_variation(f, r)
    eps = var + 0.05 if var > 0 else 0.1
    return PushFixture(f=f, a=PointSet(space, a_members), r=r, n=n, eps=eps)


def small_fixture(seed: int) -> dict:
    """Tiny deterministic bundle (<= 8 points) for oracle diffing."""
    rng = np.random.default_rng(seed)
    space = random_space(rng, int(rng.integers(5, 9)), dim=1, box=8.0)
    cover = random_cover(rng, space, max_elements=6)
    pumap = random_pumap(rng, space, 4)
    return {"space": space, "cover": cover, "pumap": pumap, "n": int(rng.integers(0, 3))}


@dataclass(frozen=True)
class TheoremAFixture:
    schedule: FillerSchedule
    space: FiniteMetricSpace
    f: PUMap
    a: PointSet
    u_r: Cover
    bound_m: float
    width: float
    lattice_step: float
    coarsened: bool

    def describe(self) -> dict:
        return {
            "schedule": self.schedule.to_dict(),
            "points": len(self.space),
            "width": self.width,
            "lattice_step": self.lattice_step,
            "coarsened": self.coarsened,
        }


def theorem_a_fixture(n: int, eps: float, k_limit: int = 10**6, point_cap: int = 5000) -> TheoremAFixture:
    """1-D integer-interval lattice of width >= 10*k*S(k) with a scale-k
    cover of multiplicity n+1 and a two-interval barycentric delta-PU.

    n = 0 uses disjoint blocks of three lattice points at spacing k (the
    0-dimensional analogue of the shifted bricks; mesh 2k = S(k)); n = 1
    uses the 1-D shifted-brick cover (mesh bound 4k = S(k)).  When the
    width would exceed point_cap lattice points the lattice is coarsened
    to a larger step, recorded in describe().
    """
    require(n in (0, 1), "BAD_PARAMETER", "fixture supports n in {0, 1}")
    if n == 0:
        mesh_fn = lambda k: 2.0 * k
    else:
        mesh_fn = lambda k: brick_mesh_bound(k, 1)
    schedule = find_schedule(n, eps, mesh_fn, k_limit)
    k = schedule.k
    width = 10.0 * k * schedule.S_of_k

    if n == 0:
        step = float(k)  # blocks of three need spacing k for mesh 2k
        coarsened = step > 1.0
    else:
        step = float(max(1, math.ceil(width / (point_cap - 1))))
        coarsened = step > 1.0
    positions = np.arange(0.0, width + 0.5, step)
    require(positions.size <= point_cap, "BAD_PARAMETER", f"{positions.size} lattice points exceed the cap {point_cap}")
    space = line_space(positions)
    ids = list(space.ids)

    if n == 0:
        elements = {f"u{j}": frozenset(ids[3 * j : 3 * j + 3]) for j in range((len(ids) + 2) // 3)}
        u_r = Cover(space, elements, label=f"blocks3(R={k})")
    else:
        u_r = brick_cover(space, float(k), 1)

    pos = positions
    v1 = frozenset(ids[i] for i in np.nonzero(pos <= 0.65 * width)[0])
    v2 = frozenset(ids[i] for i in np.nonzero(pos >= 0.35 * width)[0])
    f = barycentric_map(Cover(space, {"V1": v1, "V2": v2}, label="two-intervals"))
    a = PointSet(space, frozenset(ids[i] for i in np.nonzero(pos <= 0.2 * width)[0]))
    return TheoremAFixture(
        schedule=schedule,
        space=space,
        f=f,
        a=a,
        u_r=u_r,
        bound_m=0.66 * width,
        width=width,
        lattice_step=step,
        coarsened=coarsened,
    )


@dataclass(frozen=True)
class PropertyAFixture:
    space: FiniteMetricSpace
    family: SetFamily
    params: PropertyAInput
    bound_m: float


def property_a_fixture(
    length: int = 600,
    s_radius: float = 401.0,
    delta: float = 0.5,
    m: int = 3,
    r: float = 7.0,
    depth: int = 1,
) -> PropertyAFixture:
    """Path graph with open-ball set families; the default parameters pass
    the delta/(8M) ratio precondition with every |A_x| in the large regime."""
    space = path_graph_space(length)
    family = ball_family(space, s_radius, depth)
    params = PropertyAInput(R=r, eps=delta, M=m, delta=delta)
    return PropertyAFixture(space=space, family=family, params=params, bound_m=4.0 * s_radius)
