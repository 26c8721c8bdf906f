"""Asymptotic dimension at scale: certificates from covers and from maps,
the end-to-end pipeline from a pushed partition of unity, an upper-bound
estimator, and an exhaustive lower-bound search for tiny spaces.

A finite space makes plain "asdim <= n" vacuous, so every certificate is
indexed by the scale R at which it was verified.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import get_tol
from .covers import Cover, GreedyResult, brick_cover, greedy_cover, stats
from .errors import CoarseScopeError, require
from .metric_space import INF, FiniteMetricSpace
from .pu_maps import PUMap, check_lipschitz, star_preimage_cover
from .simplicial import carrier, in_skeleton

__all__ = [
    "AsdimCertificate",
    "certify_from_cover",
    "certify_from_map",
    "theorem_b_pipeline",
    "estimate_upper_bound",
    "exhaustive_min_n",
]


@dataclass(frozen=True)
class AsdimCertificate:
    scale_R: float
    n_claimed: int
    witness_kind: str  # "cover" | "map"
    measured: dict[str, float]
    verdict: bool
    provenance: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "scale_R": self.scale_R,
            "n_claimed": self.n_claimed,
            "witness_kind": self.witness_kind,
            "measured": dict(self.measured),
            "verdict": self.verdict,
            "provenance": list(self.provenance),
        }


def certify_from_cover(cover: Cover, r: float, n: int) -> AsdimCertificate:
    """Pass iff the cover has multiplicity <= n+1, Lebesgue >= R and finite
    mesh.  Also reports the recipe delta = max(1/R, (n+1)^2/(4R)) at which
    the barycentric map is claimed to be a delta-PU; the value is reported,
    not asserted."""
    require(n >= 0, "BAD_PARAMETER", "n must be >= 0")
    tol = get_tol()
    st = stats(cover)
    verdict = st.multiplicity <= n + 1 and st.lebesgue >= r - tol and st.mesh < INF
    recipe_delta = max(1.0 / r, (n + 1) ** 2 / (4.0 * r)) if r > 0 else INF
    return AsdimCertificate(
        scale_R=r,
        n_claimed=n,
        witness_kind="cover",
        measured={
            "lebesgue": st.lebesgue,
            "multiplicity": float(st.multiplicity),
            "mesh": st.mesh,
            "recipe_delta": recipe_delta,
        },
        verdict=verdict,
        provenance=(f"cover:{cover.label or 'unlabeled'}",),
    )


def certify_from_map(f: PUMap, delta: float, n: int, bound_m: float) -> AsdimCertificate:
    """A (delta,delta)-Lipschitz map into the n-skeleton with star-preimage
    mesh <= bound_M certifies scale R = (1-(n+1)delta)/((n+1)delta); the
    induced star-preimage cover is re-measured, never trusted from the
    formula."""
    require(n >= 0, "BAD_PARAMETER", "n must be >= 0")
    require(delta > 0, "BAD_PARAMETER", "delta must be positive")
    tol = get_tol()
    if (n + 1) * delta >= 1.0:
        raise CoarseScopeError("DELTA_TOO_LARGE", f"(n+1)*delta = {(n + 1) * delta} >= 1 gives no positive scale")
    for p in f.domain_ids():
        if not in_skeleton(f.values[p], n):
            raise CoarseScopeError("NOT_IN_SKELETON", f"f({p!r}) has support size {len(f.values[p].weights)} > n+1", p)
    lip = check_lipschitz(f, delta, delta)
    if not lip.ok:
        raise CoarseScopeError("LIPSCHITZ_FAILED", f"max excess {lip.max_excess} over (delta, delta)", lip.worst_pair)

    induced_r = (1.0 - (n + 1) * delta) / ((n + 1) * delta)
    induced = star_preimage_cover(f)
    st = stats(induced)
    verdict = st.mesh <= bound_m + tol and st.multiplicity <= n + 1 and st.lebesgue >= induced_r - tol
    return AsdimCertificate(
        scale_R=induced_r,
        n_claimed=n,
        witness_kind="map",
        measured={
            "lambda_hat": lip.lambda_hat,
            "delta": delta,
            "induced_R": induced_r,
            "induced_lebesgue": st.lebesgue,
            "induced_multiplicity": float(st.multiplicity),
            "induced_mesh": st.mesh,
        },
        verdict=verdict,
        provenance=("map",),
    )


def theorem_b_pipeline(f: PUMap, pushed_h: PUMap, eps: float, n: int) -> AsdimCertificate:
    """From a witness map f and its push h (an eps-PU in the n-skeleton,
    carrier(h(x)) contained in carrier(f(x))), certify via the map route.

    The map route needs (n+1)*delta < 1.  When the nominal eps is too
    large for that, fall back to the strongest delta h actually supports:
    max of the measured (eps, eps)-Lipschitz constant and the value whose
    induced scale equals the measured star-preimage Lebesgue number.
    """
    from .pu_maps import measure_eps_star

    for p in pushed_h.domain_ids():
        if not in_skeleton(pushed_h.values[p], n):
            raise CoarseScopeError("NOT_IN_SKELETON", f"h({p!r}) has support size {len(pushed_h.values[p].weights)} > n+1", p)
        if not carrier(pushed_h.values[p]) <= carrier(f.values[p]):
            raise CoarseScopeError("CARRIER_NOT_INCLUDED", f"carrier of h({p!r}) escapes carrier of f({p!r})", p)
    st = stats(star_preimage_cover(pushed_h))
    delta_used = eps
    prov = ("pushed_map", "map")
    if (n + 1) * eps >= 1.0:
        eps_star = measure_eps_star(pushed_h)
        matched = 0.5 / (n + 1) if st.lebesgue == INF else 1.0 / ((n + 1) * (st.lebesgue + 1.0))
        delta_used = max(eps_star, matched)
        prov = ("pushed_map", f"delta_fallback:{delta_used!r}", "map")
    cert = certify_from_map(pushed_h, delta_used, n, st.mesh)
    return AsdimCertificate(
        scale_R=cert.scale_R,
        n_claimed=cert.n_claimed,
        witness_kind=cert.witness_kind,
        measured=cert.measured,
        verdict=cert.verdict,
        provenance=prov,
    )


def estimate_upper_bound(space: FiniteMetricSpace, r: float, n_max: int) -> tuple[int | None, Cover | None]:
    """Smallest n <= n_max at which a generated cover (brick when the space
    is Euclidean of matching dimension, greedy otherwise) passes
    certify_from_cover at scale R.  Failure is not a lower bound."""
    require(r > 0, "BAD_PARAMETER", "R must be positive")
    dim = space.coords.shape[1] if space.coords is not None else None
    for n in range(n_max + 1):
        candidates: list[Cover] = []
        if dim is not None and dim == n:
            candidates.append(brick_cover(space, r, n))
        g = greedy_cover(space, r, n + 1)
        if g.ok:
            candidates.append(g.cover)
        for cand in candidates:
            cert = certify_from_cover(cand, r, n)
            if cert.verdict:
                return n, cand
    return None, None


def exhaustive_min_n(space: FiniteMetricSpace, r: float, mesh_bound: float) -> tuple[int, Cover]:
    """Exhaustive lower-bound search for |X| <= 12: minimize multiplicity
    over all covers with Lebesgue >= R and mesh <= mesh_bound.

    A witness cover of multiplicity m, Lebesgue >= R and mesh <= B exists
    iff some point-coloring c does, with elements U_c the union of open
    R-balls over each color class: shrink each witness element to the union
    of the open R-balls it serves; this preserves the Lebesgue bound and
    never raises multiplicity or mesh.  So enumerating set partitions of
    the points is a complete search.
    """
    require(r > 0, "BAD_PARAMETER", "R must be positive")
    if len(space) > 12:
        raise CoarseScopeError("SPACE_TOO_LARGE", f"{len(space)} points; exhaustive search capped at 12")
    tol = get_tol()
    n_pts = len(space)
    d = space.d

    best_mult = n_pts + 1
    best_cover: Cover | None = None

    def class_diam_ok(block: list[int], extra: int) -> bool:
        # block points lie inside their own element, so the element diameter
        # is at least the class diameter; prune on that necessary condition
        return all(d[extra, i] <= mesh_bound + tol for i in block)

    def evaluate(blocks: list[list[int]]):
        nonlocal best_mult, best_cover
        elements = {}
        for k, block in enumerate(blocks):
            members: set[str] = set()
            for i in block:
                members.update(space.ids[j] for j in np.nonzero(d[i] < r)[0])
            elements[f"c{k}"] = frozenset(members)
        try:
            cover = Cover(space, elements)
        except CoarseScopeError:
            return
        st = stats(cover)
        if st.lebesgue >= r - tol and st.mesh <= mesh_bound + tol and st.multiplicity < best_mult:
            best_mult = st.multiplicity
            best_cover = cover

    blocks: list[list[int]] = []

    def walk(i: int):
        if best_mult == 1:
            return
        if i == n_pts:
            evaluate(blocks)
            return
        for block in blocks:
            if class_diam_ok(block, i):
                block.append(i)
                walk(i + 1)
                block.pop()
        blocks.append([i])
        walk(i + 1)
        blocks.pop()

    walk(0)
    if best_cover is None:
        raise CoarseScopeError("NO_COVER_FOUND", f"no cover meets mesh <= {mesh_bound} with Lebesgue >= {r}")
    return best_mult - 1, best_cover
