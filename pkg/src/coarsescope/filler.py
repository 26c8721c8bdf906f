"""The constructive filler h = alpha * r + (1 - alpha) * beta.

Ingredients: the skeleton push r over B(A, R), the barycentric weight
alpha of the two-set cover {B(A,R), B(C,R)} with C = X \\ B(A,R), and
beta, the barycentric map of the merged cover obtained by assigning every
element of a fine cover to a vertex of f whose star-preimage contains it.

The parameter schedule fixes R = k, delta = 1/(k*S(k)) and
mu = (8n+5)(R+1)delta, where S(k) is the mesh the chosen cover generator
reports at scale k; the three schedule inequalities are exactly the
conditions under which the output is certified as an eps-PU.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .config import get_tol
from .covers import Cover, stats
from .errors import CoarseScopeError, require
from .metric_space import INF, FiniteMetricSpace, PointSet, neighborhood
from .pu_maps import (
    DeltaPUCertificate,
    LipschitzReport,
    PUMap,
    RawMap,
    check_delta_pu,
    check_lipschitz,
    measure_variation,
)
from .simplicial import SimplexPoint, carrier
from .skeleton_push import PushResult, push_to_skeleton

__all__ = [
    "FillerSchedule",
    "find_schedule",
    "AlphaResult",
    "build_alpha",
    "MergeResult",
    "merge_cover_by_assignment",
    "BetaResult",
    "build_beta",
    "FillerResult",
    "build_filler",
]


@dataclass(frozen=True)
class FillerSchedule:
    n: int
    eps: float
    k: int
    R: float  # = k
    delta: float  # = 1 / (k * S(k))
    mu: float  # = (8n+5) (R+1) delta
    S_of_k: float

    def inequality_1(self) -> bool:
        lam_h = (self.n + 1) * 4.0 * (self.n + 5) ** 2 / self.R
        return (1.0 - (self.n + 1) * self.mu) / lam_h >= 1.0 / self.eps

    def inequality_2(self) -> bool:
        return self.mu < self.eps

    def inequality_3(self) -> bool:
        return 4.0 * (self.n + 5) ** 2 / self.R < self.eps

    def all_ok(self) -> bool:
        return self.inequality_1() and self.inequality_2() and self.inequality_3()

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "eps": self.eps,
            "k": self.k,
            "R": self.R,
            "delta": self.delta,
            "mu": self.mu,
            "S_of_k": self.S_of_k,
            "inequalities": [self.inequality_1(), self.inequality_2(), self.inequality_3()],
        }


def _schedule_at(n: int, eps: float, k: int, s_of_k: float) -> FillerSchedule:
    delta = 1.0 / (k * s_of_k)
    mu = (8 * n + 5) * (k + 1.0) * delta
    return FillerSchedule(n=n, eps=eps, k=k, R=float(k), delta=delta, mu=mu, S_of_k=s_of_k)


def find_schedule(n: int, eps: float, mesh_fn: Callable[[int], float], k_limit: int = 10**6) -> FillerSchedule:
    """Smallest integer k >= 1 making all three schedule inequalities hold."""
    require(eps > 0, "BAD_PARAMETER", "eps must be positive")
    require(k_limit >= 1, "BAD_PARAMETER", "k_limit must be >= 1")
    last_blocking = None
    for k in range(1, k_limit + 1):
        s = float(mesh_fn(k))
        require(s > 0 and s < INF, "BAD_PARAMETER", f"mesh_fn({k}) must be finite positive, got {s}")
        sched = _schedule_at(n, eps, k, s)
        if sched.all_ok():
            return sched
        last_blocking = [
            name
            for name, ok in (
                ("inequality_1", sched.inequality_1()),
                ("inequality_2", sched.inequality_2()),
                ("inequality_3", sched.inequality_3()),
            )
            if not ok
        ]
    raise CoarseScopeError("SCHEDULE_NOT_FOUND", f"no k <= {k_limit} satisfies the schedule; blocking at k={k_limit}: {last_blocking}")


@dataclass(frozen=True)
class AlphaResult:
    alpha: dict[str, float]
    p_set: PointSet  # B(A, R)
    q_set: PointSet  # B(C, R)
    lipschitz: LipschitzReport  # 32/R bound on the two-coordinate map
    cover_lebesgue: float
    cover_lebesgue_ok: bool  # >= R/2

    def to_dict(self) -> dict:
        return {
            "lipschitz": self.lipschitz.to_dict(),
            "cover_lebesgue": self.cover_lebesgue,
            "cover_lebesgue_ok": self.cover_lebesgue_ok,
        }


def build_alpha(space: FiniteMetricSpace, a: PointSet, r: float) -> AlphaResult:
    """alpha(x) = dist(x, X\\P) / (dist(x, X\\P) + dist(x, X\\Q)) with
    P = B(A,R), C = X\\P, Q = B(C,R); alpha = 1 when C is empty, 0 when A is.

    Verifies the two claims used downstream: the two-coordinate map
    (alpha, 1-alpha) is 32/R-Lipschitz and the cover {P, Q} has Lebesgue
    number at least R/2."""
    require(r > 0, "BAD_PARAMETER", "R must be positive")
    tol = get_tol()
    p_set = neighborhood(a, r)
    c_members = frozenset(space.ids) - p_set.members
    c_set = PointSet(space, c_members)
    q_set = neighborhood(c_set, r)

    trivial = LipschitzReport(True, 32.0 / r, 0.0, 0.0, 0.0, None)
    if not a.members:
        alpha = {p: 0.0 for p in space.ids}
        return AlphaResult(alpha, p_set, q_set, trivial, INF, True)
    if not c_members:
        alpha = {p: 1.0 for p in space.ids}
        return AlphaResult(alpha, p_set, q_set, trivial, INF, True)

    import numpy as np

    comp_p = np.array([i for i, x in enumerate(space.ids) if x not in p_set.members], dtype=np.int64)
    comp_q = np.array([i for i, x in enumerate(space.ids) if x not in q_set.members], dtype=np.int64)
    fp = space.d[:, comp_p].min(axis=1) if comp_p.size else np.full(len(space), INF)
    fq = space.d[:, comp_q].min(axis=1) if comp_q.size else np.full(len(space), INF)
    alpha = {}
    for i, x in enumerate(space.ids):
        if fp[i] == INF:
            alpha[x] = 1.0
        elif fq[i] == INF:
            alpha[x] = 0.0
        else:
            alpha[x] = float(fp[i] / (fp[i] + fq[i]))

    two_coord = RawMap(space, {x: {"P": alpha[x], "Q": 1.0 - alpha[x]} for x in space.ids})
    lip = check_lipschitz(two_coord, 32.0 / r, 0.0)
    pq_cover = Cover(space, {"P": p_set.members, "Q": q_set.members}, label="{B(A,R), B(C,R)}")
    leb = stats(pq_cover).lebesgue
    return AlphaResult(alpha, p_set, q_set, lip, leb, leb >= r / 2.0 - tol)


@dataclass(frozen=True)
class MergeResult:
    cover: Cover  # indexed by target vertices of f
    assignment: dict[str, str]  # element index -> vertex
    multiplicity_ok: bool
    lebesgue_ok: bool
    star_inclusion_ok: bool

    def to_dict(self) -> dict:
        return {
            "assignment": dict(self.assignment),
            "multiplicity_ok": self.multiplicity_ok,
            "lebesgue_ok": self.lebesgue_ok,
            "star_inclusion_ok": self.star_inclusion_ok,
        }


def merge_cover_by_assignment(u: Cover, f: PUMap, delta: float) -> MergeResult:
    """Assign each element of u the vertex maximizing the worst-case star
    depth min_{x in U} f(x)(v) (ties by vertex id), then union elements by
    assigned vertex.  Requires mesh(u) < 1/delta so every element fits in
    some star-preimage."""
    require(delta > 0, "BAD_PARAMETER", "delta must be positive")
    tol = get_tol()
    u_stats = stats(u)
    if u_stats.mesh >= 1.0 / delta:
        raise CoarseScopeError("PRECONDITION_MESH", f"mesh {u_stats.mesh} >= 1/delta = {1.0 / delta}")
    vorder = f.vertex_order()
    assignment: dict[str, str] = {}
    merged: dict[str, set[str]] = {}
    for s, members in u.elements.items():
        best_v, best_depth = None, 0.0
        for v in vorder:
            depth = min(f.values[x](v) for x in members)
            if depth > best_depth:
                best_v, best_depth = v, depth
        if best_v is None:
            raise CoarseScopeError("NO_ASSIGNABLE_VERTEX", f"element {s!r} fits inside no star-preimage", s)
        assignment[s] = best_v
        merged.setdefault(best_v, set()).update(members)
    cover = Cover(u.space, {v: frozenset(m) for v, m in sorted(merged.items())}, label="merged-by-assignment")
    m_stats = stats(cover)
    mult_ok = m_stats.multiplicity <= u_stats.multiplicity
    leb_ok = m_stats.lebesgue >= u_stats.lebesgue - tol
    incl_ok = all(all(f.values[x](v) > 0 for x in members) for v, members in cover.elements.items())
    return MergeResult(cover, assignment, mult_ok, leb_ok, incl_ok)


@dataclass(frozen=True)
class BetaResult:
    beta: PUMap  # into f's target
    support_ok: bool  # support(beta(x)) <= support(f(x)) everywhere
    lebesgue: float
    lebesgue_ok: bool  # >= R

    def to_dict(self) -> dict:
        return {"support_ok": self.support_ok, "lebesgue": self.lebesgue, "lebesgue_ok": self.lebesgue_ok}


def build_beta(u_merged: Cover, f: PUMap, r: float) -> BetaResult:
    """beta = barycentric map of the merged cover, viewed in f's target."""
    from .pu_maps import barycentric_map, map_lebesgue, star_preimage_cover

    tol = get_tol()
    bary = barycentric_map(u_merged)
    beta = PUMap(f.space, f.target, bary.values)
    support_ok = all(beta.values[x].support() <= f.values[x].support() for x in f.space.ids)
    leb = stats(star_preimage_cover(beta)).lebesgue
    return BetaResult(beta, support_ok, leb, leb >= r - tol)


@dataclass(frozen=True)
class FillerResult:
    h: PUMap
    alpha: AlphaResult
    beta: BetaResult
    push: PushResult
    merge: MergeResult
    schedule: FillerSchedule
    eps_f_measured: float
    agreement_ok: bool
    carrier_ok: bool
    h_certificate: DeltaPUCertificate  # eps-PU certificate for h
    alpha_r_lipschitz: LipschitzReport  # (34/R, mu)
    beta_part_lipschitz: LipschitzReport  # (4(n+3)^2/R, 0)
    h_lipschitz: LipschitzReport  # (4(n+5)^2/R, mu)

    @property
    def verdict(self) -> bool:
        return (
            self.agreement_ok
            and self.carrier_ok
            and self.h_certificate.verdict
            and self.push.agreement_on_A
            and self.push.carrier_ok
            and self.alpha_r_lipschitz.ok
            and self.beta_part_lipschitz.ok
            and self.h_lipschitz.ok
        )

    def to_dict(self) -> dict:
        return {
            "schedule": self.schedule.to_dict(),
            "eps_f_measured": self.eps_f_measured,
            "agreement_ok": self.agreement_ok,
            "carrier_ok": self.carrier_ok,
            "h_certificate": self.h_certificate.to_dict(),
            "alpha": self.alpha.to_dict(),
            "beta": self.beta.to_dict(),
            "merge": self.merge.to_dict(),
            "push": self.push.to_dict(),
            "alpha_r_lipschitz": self.alpha_r_lipschitz.to_dict(),
            "beta_part_lipschitz": self.beta_part_lipschitz.to_dict(),
            "h_lipschitz": self.h_lipschitz.to_dict(),
            "verdict": self.verdict,
        }


def _combine(alpha: dict[str, float], r_map: PUMap, beta: PUMap, f: PUMap) -> PUMap:
    values: dict[str, SimplexPoint] = {}
    for x in f.space.ids:
        a = alpha[x]
        if a >= 1.0:  # exact reuse keeps h|A = f|A bitwise
            values[x] = r_map.values[x]
            continue
        if a <= 0.0:
            values[x] = beta.values[x]
            continue
        weights: dict[str, float] = {}
        for v, w in r_map.values[x].weights.items():
            weights[v] = weights.get(v, 0.0) + a * w
        for v, w in beta.values[x].weights.items():
            weights[v] = weights.get(v, 0.0) + (1.0 - a) * w
        values[x] = SimplexPoint(weights)
    return PUMap(f.space, f.target, values)


def build_filler(
    f: PUMap,
    a: PointSet,
    n: int,
    eps: float,
    u_r: Cover,
    schedule: FillerSchedule,
    bound_m: float,
    check_preconditions: bool = True,
) -> FillerResult:
    """Run the whole pipeline and verify every clause.

    Preconditions (when checked): f is a delta-PU at the schedule's delta
    with star mesh <= bound_m; f(A) lies in the n-skeleton; u_r has
    multiplicity <= n+1, Lebesgue >= R and mesh <= S(k) < 1/delta.
    """
    require(n == schedule.n and eps == schedule.eps, "BAD_PARAMETER", "schedule does not match (n, eps)")
    r = schedule.R
    tol = get_tol()

    if check_preconditions:
        cert = check_delta_pu(f, schedule.delta, bound_m)
        if not cert.verdict:
            raise CoarseScopeError("PRECONDITION_DELTA_PU", f"f is not a {schedule.delta}-PU: {cert.to_dict()}")
        u_stats = stats(u_r)
        ok = (
            u_stats.multiplicity <= n + 1
            and u_stats.lebesgue >= r - tol
            and u_stats.mesh <= schedule.S_of_k + tol
            and u_stats.mesh < 1.0 / schedule.delta
        )
        if not ok:
            raise CoarseScopeError(
                "PRECONDITION_COVER",
                f"u_r stats (mult={u_stats.multiplicity}, leb={u_stats.lebesgue}, mesh={u_stats.mesh}) "
                f"violate (n+1={n + 1}, R={r}, S={schedule.S_of_k}, 1/delta={1.0 / schedule.delta})",
            )

    eps_f = measure_variation(f, r)
    eps_push = eps_f if eps_f > 0 else (r + 1.0) * schedule.delta
    push = push_to_skeleton(f, a, r, n, eps_push)

    alpha_res = build_alpha(f.space, a, r)
    merge = merge_cover_by_assignment(u_r, f, schedule.delta)
    beta_res = build_beta(merge.cover, f, r)

    h = _combine(alpha_res.alpha, push.r, beta_res.beta, f)

    agreement_ok = all(h.values[x].weights == f.values[x].weights for x in a.members)
    carrier_ok = all(carrier(h.values[x]) <= carrier(f.values[x]) for x in f.space.ids)
    h_cert = check_delta_pu(h, eps, bound_m)

    alpha_r_raw = RawMap(f.space, {x: {v: alpha_res.alpha[x] * w for v, w in push.r.values[x].weights.items()} for x in f.space.ids})
    beta_part_raw = RawMap(
        f.space,
        {x: {v: (1.0 - alpha_res.alpha[x]) * w for v, w in beta_res.beta.values[x].weights.items()} for x in f.space.ids},
    )
    mu = schedule.mu
    alpha_r_lip = check_lipschitz(alpha_r_raw, 34.0 / r, mu)
    beta_part_lip = check_lipschitz(beta_part_raw, 4.0 * (n + 3) ** 2 / r, 0.0)
    h_lip = check_lipschitz(h, 4.0 * (n + 5) ** 2 / r, mu)

    return FillerResult(
        h=h,
        alpha=alpha_res,
        beta=beta_res,
        push=push,
        merge=merge,
        schedule=schedule,
        eps_f_measured=eps_f,
        agreement_ok=agreement_ok,
        carrier_ok=carrier_ok,
        h_certificate=h_cert,
        alpha_r_lipschitz=alpha_r_lip,
        beta_part_lipschitz=beta_part_lip,
        h_lipschitz=h_lip,
    )
