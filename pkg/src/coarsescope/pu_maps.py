"""Partition-of-unity maps X -> K and the quantitative verifiers around
them: (lambda, C)-Lipschitz checks, (R, eps) variation, Lebesgue numbers of
maps, the barycentric construction, delta-PU certificates and the coarse
pullback.

All checkers quantify over the map's declared domain (whole space unless a
PointSet domain is given) and report exact maxima with worst-pair
witnesses.  Lipschitz checks allow the additive slack tol; variation
checks are strict `< eps` relaxed to `< eps + tol`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .config import get_tol
from .covers import Cover, stats
from .errors import CoarseScopeError, require
from .metric_space import INF, FiniteMetricSpace, PointSet
from .simplicial import Complex, SimplexPoint, carrier, in_skeleton, nerve

__all__ = [
    "PUMap",
    "RawMap",
    "LipschitzReport",
    "VariationReport",
    "DeltaPUCertificate",
    "PullbackResult",
    "check_lipschitz",
    "check_variation",
    "measure_lipschitz",
    "measure_eps_star",
    "variation_to_lipschitz",
    "star_preimage_cover",
    "map_lebesgue",
    "lebesgue_lower_bound",
    "barycentric_map",
    "check_barycentric_bound",
    "check_delta_pu",
    "pullback_partition",
]


@dataclass(frozen=True)
class PUMap:
    space: FiniteMetricSpace
    target: Complex
    values: dict[str, SimplexPoint]
    domain: PointSet | None = None  # None = total map
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        for p in self.domain_ids():
            require(p in self.values, "BAD_DOCUMENT", f"no value for point {p!r}", p)

    @classmethod
    def from_values(cls, space, target, values, domain=None, validate=True) -> "PUMap":
        f = cls(space, target, dict(values), domain)
        if validate:
            for p in f.domain_ids():
                require(target.contains_point(values[p]), "BAD_DOCUMENT", f"value at {p!r} is not carried by a simplex of the target", p)
        return f

    def domain_ids(self) -> list[str]:
        if self.domain is None:
            return list(self.space.ids)
        return [p for p in self.space.ids if p in self.domain.members]

    def __call__(self, x: str) -> SimplexPoint:
        return self.values[x]

    def is_total(self) -> bool:
        return self.domain is None or len(self.domain.members) == len(self.space)

    def vertex_order(self) -> list[str]:
        if "vorder" not in self._cache:
            self._cache["vorder"] = sorted(self.target.vertices)
        return self._cache["vorder"]

    def dense(self) -> tuple[np.ndarray, np.ndarray, list[str]]:
        """(W, D, ids): weight matrix over the domain in vertex_order,
        the matching distance submatrix, and domain ids in row order."""
        if "dense" not in self._cache:
            ids = self.domain_ids()
            vorder = self.vertex_order()
            vindex = {v: k for k, v in enumerate(vorder)}
            w = np.zeros((len(ids), len(vorder)))
            for i, p in enumerate(ids):
                for v, weight in self.values[p].weights.items():
                    w[i, vindex[v]] = weight
            idx = np.array([self.space.index(p) for p in ids], dtype=np.int64)
            d = self.space.d[np.ix_(idx, idx)]
            self._cache["dense"] = (w, d, ids)
        return self._cache["dense"]

    def sparse(self):
        """(indptr, indices, data, nverts, d, ids): CSR weight rows with
        column indices ascending in vertex_order, plus the distance
        submatrix.  Used by the scans when rows are much shorter than the
        vertex count."""
        if "sparse" not in self._cache:
            ids = self.domain_ids()
            vindex = {v: k for k, v in enumerate(self.vertex_order())}
            indptr = np.zeros(len(ids) + 1, dtype=np.int64)
            cols: list[int] = []
            data: list[float] = []
            for i, p in enumerate(ids):
                row = sorted((vindex[v], w) for v, w in self.values[p].weights.items())
                cols.extend(k for k, _ in row)
                data.extend(w for _, w in row)
                indptr[i + 1] = len(cols)
            idx = np.array([self.space.index(p) for p in ids], dtype=np.int64)
            d = self.space.d[np.ix_(idx, idx)]
            self._cache["sparse"] = (
                indptr,
                np.array(cols, dtype=np.int64),
                np.array(data, dtype=np.float64),
                len(vindex),
                d,
                ids,
            )
        return self._cache["sparse"]

    def restricted(self, domain: PointSet) -> "PUMap":
        vals = {p: self.values[p] for p in domain.members}
        return PUMap(self.space, self.target, vals, domain)


@dataclass(frozen=True)
class RawMap:
    """Unnormalized l1-valued map, for intermediate products like alpha*r."""

    space: FiniteMetricSpace
    values: dict[str, dict[str, float]]
    domain: PointSet | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def domain_ids(self) -> list[str]:
        if self.domain is None:
            return list(self.space.ids)
        return [p for p in self.space.ids if p in self.domain.members]

    def dense(self):
        if "dense" not in self._cache:
            ids = self.domain_ids()
            vorder = sorted({v for val in self.values.values() for v in val})
            vindex = {v: k for k, v in enumerate(vorder)}
            w = np.zeros((len(ids), max(len(vorder), 1)))
            for i, p in enumerate(ids):
                for v, weight in self.values[p].items():
                    w[i, vindex[v]] = weight
            idx = np.array([self.space.index(p) for p in ids], dtype=np.int64)
            d = self.space.d[np.ix_(idx, idx)]
            self._cache["dense"] = (w, d, ids)
        return self._cache["dense"]


@dataclass(frozen=True)
class LipschitzReport:
    ok: bool
    lam: float
    C: float
    lambda_hat: float
    max_excess: float
    worst_pair: tuple[str, str] | None

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "lambda": self.lam,
            "C": self.C,
            "lambda_hat": self.lambda_hat,
            "max_excess": self.max_excess,
            "worst_pair": list(self.worst_pair) if self.worst_pair else None,
        }


@dataclass(frozen=True)
class VariationReport:
    ok: bool
    R: float
    eps: float
    max_l1: float
    worst_pair: tuple[str, str] | None

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "R": self.R,
            "eps": self.eps,
            "max_l1": self.max_l1,
            "worst_pair": list(self.worst_pair) if self.worst_pair else None,
        }


def _prefer_sparse(f) -> bool:
    if not isinstance(f, PUMap):
        return False
    nverts = len(f.target.vertices)
    if nverts < 64:
        return False
    nnz = sum(len(f.values[p].weights) for p in f.domain_ids())
    return nnz * 8 <= max(len(f.domain_ids()), 1) * nverts


def _lipschitz_raw(f, d_shift: float, lam: float, c: float):
    """(excess, ei, ej, lam_hat, hi, hj, ids) over the domain pairs."""
    if _prefer_sparse(f):
        indptr, indices, data, nverts, d, ids = f.sparse()
        out = _kernels.lipschitz_scan_sparse(indptr, indices, data, nverts, d + d_shift, lam, c)
    else:
        w, d, ids = f.dense()
        out = _kernels.lipschitz_scan(w, d + d_shift, lam, c)
    return (*out, ids)


def check_lipschitz(f, lam: float, c: float) -> LipschitzReport:
    """Verify ||f(x)-f(y)||_1 <= lam*d(x,y) + c + tol over all domain pairs;
    reports the tight lambda-hat for the given c and the worst pair."""
    if len(f.domain_ids()) < 2:
        return LipschitzReport(True, lam, c, 0.0, -c, None)
    excess, ei, ej, lam_hat, hi, hj, ids = _lipschitz_raw(f, 0.0, lam, c)
    ok = bool(excess <= get_tol())
    worst = (ids[ei], ids[ej]) if (not ok or hi < 0) else (ids[hi], ids[hj])
    return LipschitzReport(ok, lam, c, float(lam_hat), float(excess), worst)


def measure_lipschitz(f, c: float = 0.0) -> float:
    """Tight lambda-hat: smallest lambda with (lambda, c)-Lipschitz holding."""
    return check_lipschitz(f, 0.0, c).lambda_hat


def measure_eps_star(f) -> float:
    """Smallest eps with f (eps, eps)-Lipschitz: max ||f(x)-f(y)||_1/(d+1)."""
    if len(f.domain_ids()) < 2:
        return 0.0
    _, _, _, eps, _, _, _ = _lipschitz_raw(f, 1.0, 0.0, 0.0)
    return float(eps)


def _variation_raw(f, r: float):
    if _prefer_sparse(f):
        indptr, indices, data, nverts, d, ids = f.sparse()
        out = _kernels.variation_scan_sparse(indptr, indices, data, nverts, d, r)
    else:
        w, d, ids = f.dense()
        out = _kernels.variation_scan(w, d, r)
    return (*out, ids)


def check_variation(f, r: float, eps: float) -> VariationReport:
    """True iff every pair at distance <= R has l1 distance < eps (+tol)."""
    require(r >= 0, "BAD_PARAMETER", "R must be >= 0")
    require(eps > 0, "BAD_PARAMETER", "eps must be positive")
    if len(f.domain_ids()) < 2:
        return VariationReport(True, r, eps, 0.0, None)
    best, bi, bj, ids = _variation_raw(f, r)
    if bi < 0:
        return VariationReport(True, r, eps, 0.0, None)
    return VariationReport(bool(best < eps + get_tol()), r, eps, float(best), (ids[bi], ids[bj]))


def measure_variation(f, r: float) -> float:
    """Exact sup of ||f(x)-f(y)||_1 over pairs with d <= R."""
    if len(f.domain_ids()) < 2:
        return 0.0
    best, bi, _, _ = _variation_raw(f, r)
    return float(best) if bi >= 0 else 0.0


def variation_to_lipschitz(r: float, eps: float) -> tuple[float, float]:
    """(R, eps) variation implies ((2-eps)/R, eps)-Lipschitz for eps <= 2."""
    require(r > 0, "BAD_PARAMETER", "R must be positive")
    if not (0.0 < eps <= 2.0):
        raise CoarseScopeError("EPS_OUT_OF_RANGE", f"eps={eps} outside (0, 2]")
    return ((2.0 - eps) / r, eps)


def star_preimage_cover(f: PUMap) -> Cover:
    """Cover {x : f(x)(v) > 0} indexed by target vertices; empty elements
    (vertices carrying no mass anywhere) are dropped."""
    require(f.is_total(), "NOT_A_COVER", "star preimages of a partial map do not cover the space")
    elements: dict[str, set[str]] = {v: set() for v in f.vertex_order()}
    for p in f.domain_ids():
        sup = f.values[p].support()
        require(bool(sup), "NOT_A_COVER", f"value at {p!r} has empty support", p)
        for v in sup:
            elements[v].add(p)
    return Cover(f.space, {v: frozenset(m) for v, m in elements.items()}, label="star-preimages")


def map_lebesgue(f: PUMap) -> float:
    return stats(star_preimage_cover(f)).lebesgue


def lebesgue_lower_bound(lam: float, c: float, n: int) -> float:
    """(1 - (n+1)C) / ((n+1) lambda): guaranteed Lebesgue number of any
    (lambda, C)-Lipschitz map into an n-skeleton."""
    require(lam > 0, "BAD_PARAMETER", "lambda must be positive")
    if (n + 1) * c >= 1.0:
        raise CoarseScopeError("BOUND_DEGENERATE", f"(n+1)*C = {(n + 1) * c} >= 1, bound is non-positive")
    return (1.0 - (n + 1) * c) / ((n + 1) * lam)


def barycentric_map(cover: Cover) -> PUMap:
    """phi_s(x) = f_s(x) / sum_t f_t(x) into the nerve of the cover.

    When some f_s(x) = +inf (element = X), the weight concentrates
    uniformly on the infinite indices, the limit of the ratio.
    """
    fs = cover.member_distances()
    index_set = cover.index_set
    k = nerve(cover)
    values: dict[str, SimplexPoint] = {}
    for i, p in enumerate(cover.space.ids):
        row = fs[i]
        inf_idx = np.nonzero(np.isinf(row))[0]
        if inf_idx.size:
            weights = {index_set[j]: 1.0 / inf_idx.size for j in inf_idx}
        else:
            total = row.sum()
            if total <= 0:
                raise CoarseScopeError("UNCOVERED_POINT", f"point {p!r} has zero distance to every complement", p)
            weights = {index_set[j]: row[j] / total for j in np.nonzero(row > 0)[0]}
        values[p] = SimplexPoint(weights)
    return PUMap.from_values(cover.space, k, values, validate=False)


def check_barycentric_bound(cover: Cover) -> LipschitzReport:
    """Assert the barycentric map is 4 m(U)^2 / L(U)-Lipschitz (C = 0)."""
    st = stats(cover)
    if st.lebesgue == 0:
        raise CoarseScopeError("ZERO_LEBESGUE", "cover has zero Lebesgue number")
    bound = 0.0 if st.lebesgue == INF else 4.0 * st.multiplicity**2 / st.lebesgue
    return check_lipschitz(barycentric_map(cover), bound, 0.0)


@dataclass(frozen=True)
class DeltaPUCertificate:
    delta: float
    bound_M: float
    lipschitz_ok: bool
    lambda_hat: float
    lebesgue: float
    lebesgue_ok: bool
    star_mesh: float
    uniformly_bounded_ok: bool
    verdict: bool
    worst_pair: tuple[str, str] | None

    def to_dict(self) -> dict:
        return {
            "delta": self.delta,
            "bound_M": self.bound_M,
            "lipschitz_ok": self.lipschitz_ok,
            "lambda_hat": self.lambda_hat,
            "lebesgue": self.lebesgue,
            "lebesgue_ok": self.lebesgue_ok,
            "star_mesh": self.star_mesh,
            "uniformly_bounded_ok": self.uniformly_bounded_ok,
            "verdict": self.verdict,
            "worst_pair": list(self.worst_pair) if self.worst_pair else None,
        }


def check_delta_pu(f: PUMap, delta: float, bound_m: float) -> DeltaPUCertificate:
    """delta-PU certificate: (delta, delta)-Lipschitz, star-preimage Lebesgue
    >= 1/delta, star-preimage mesh <= bound_m (caller-declared, since
    'uniformly bounded' is scale-relative on a finite space)."""
    require(delta > 0, "BAD_PARAMETER", "delta must be positive")
    tol = get_tol()
    lip = check_lipschitz(f, delta, delta)
    st = stats(star_preimage_cover(f))
    leb_ok = st.lebesgue >= 1.0 / delta - tol
    bounded_ok = st.mesh <= bound_m + tol
    return DeltaPUCertificate(
        delta=delta,
        bound_M=bound_m,
        lipschitz_ok=lip.ok,
        lambda_hat=lip.lambda_hat,
        lebesgue=st.lebesgue,
        lebesgue_ok=leb_ok,
        star_mesh=st.mesh,
        uniformly_bounded_ok=bounded_ok,
        verdict=lip.ok and leb_ok and bounded_ok,
        worst_pair=lip.worst_pair,
    )


@dataclass(frozen=True)
class PullbackResult:
    h: PUMap
    eps_f: float
    variation: VariationReport

    def to_dict(self) -> dict:
        return {"eps_f": self.eps_f, "variation": self.variation.to_dict()}


def pullback_partition(g: dict[str, str], f: PUMap, space_x: FiniteMetricSpace, r: float, s: float) -> PullbackResult:
    """Pull a partition of unity back along a point map g: X -> Y with
    verified distortion (d_X <= R implies d_Y(g., g.) <= S).

    h = f o g; the report verifies the composed variation bound
    (R, S*eps_f + eps_f) where eps_f is f's measured (eps, eps) constant.
    """
    tol = get_tol()
    space_y = f.space
    ids_x = list(space_x.ids)
    for p in ids_x:
        require(p in g, "BAD_DOCUMENT", f"g undefined at {p!r}", p)
    gy = np.array([space_y.index(g[p]) for p in ids_x], dtype=np.int64)
    dx = space_x.d
    dy = space_y.d[np.ix_(gy, gy)]
    bad = (dx <= r) & (dy > s + tol)
    if bad.any():
        i, j = map(int, np.argwhere(bad)[0])
        raise CoarseScopeError("DISTORTION_VIOLATED", f"d_X={dx[i, j]} but d_Y={dy[i, j]} > S={s}", (ids_x[i], ids_x[j]))
    eps_f = measure_eps_star(f)
    values = {p: f.values[g[p]] for p in ids_x}
    h = PUMap.from_values(space_x, f.target, values, validate=False)
    eps_h = s * eps_f + eps_f
    var = check_variation(h, r, eps_h) if eps_h > 0 else VariationReport(True, r, 0.0, measure_variation(h, r), None)
    return PullbackResult(h=h, eps_f=eps_f, variation=var)
