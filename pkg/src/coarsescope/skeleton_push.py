"""Pushing a map into the n-skeleton over a neighborhood B(A, R).

The fold: at each point, sort the support by descending weight (ties by
vertex id ascending), keep the top n+1 vertices, and add all tail mass to
the heaviest vertex.  Points already in the skeleton are untouched, so the
result agrees with the input on A exactly.

The fold is applied globally; the quantitative guarantees ((R, (8n+5)eps)
variation and the pointwise 2(2n+1)eps estimate) are asserted on B(A, R)
only, where any extension outside is immaterial to downstream use.
"""

from __future__ import annotations

from dataclasses import dataclass

from .config import get_tol
from .errors import CoarseScopeError, require
from .metric_space import PointSet, neighborhood
from .pu_maps import PUMap, VariationReport, check_variation
from .simplicial import SimplexPoint, carrier, in_skeleton, l1_dist

__all__ = ["PushResult", "push_to_skeleton", "tail_mass", "fold_point"]


def _sorted_support(p: SimplexPoint) -> list[tuple[str, float]]:
    return sorted(p.weights.items(), key=lambda item: (-item[1], item[0]))


def fold_point(p: SimplexPoint, n: int) -> SimplexPoint:
    """Fold tail mass beyond the top n+1 vertices onto the heaviest one."""
    require(n >= 0, "BAD_PARAMETER", "n must be >= 0")
    order = _sorted_support(p)
    if len(order) <= n + 1:
        return p
    tail = sum(w for _, w in order[n + 1 :])
    weights = dict(order[: n + 1])
    v0 = order[0][0]
    weights[v0] = weights[v0] + tail
    return SimplexPoint(weights)


def tail_mass(p: SimplexPoint, n: int) -> float:
    """Mass beyond the top n+1 vertices; equals ||p - fold(p)||_1 / 2."""
    require(n >= 0, "BAD_PARAMETER", "n must be >= 0")
    order = _sorted_support(p)
    return sum(w for _, w in order[n + 1 :])


@dataclass(frozen=True)
class PushResult:
    r: PUMap  # total map (global fold); guarantees asserted on b_domain
    b_domain: PointSet
    n: int
    eps: float
    mu_claimed: float
    agreement_on_A: bool
    carrier_ok: bool
    pointwise_ok: bool
    variation: VariationReport

    @property
    def variation_verified(self) -> bool:
        return self.variation.ok

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "eps": self.eps,
            "mu_claimed": self.mu_claimed,
            "agreement_on_A": self.agreement_on_A,
            "carrier_ok": self.carrier_ok,
            "pointwise_ok": self.pointwise_ok,
            "variation": self.variation.to_dict(),
            "b_domain_size": len(self.b_domain),
        }


def push_to_skeleton(f: PUMap, a: PointSet, r: float, n: int, eps: float) -> PushResult:
    """Fold f into the n-skeleton over B(A, R) and verify every guarantee:
    exact agreement on A, carrier inclusion everywhere, the pointwise
    ||f - r||_1 < 2(2n+1)eps estimate on B(A, R), and (R, (8n+5)eps)
    variation of the result on B(A, R)."""
    require(n >= 0, "BAD_PARAMETER", "n must be >= 0")
    require(eps > 0, "BAD_PARAMETER", "eps must be positive")
    tol = get_tol()

    pre = check_variation(f, r, eps)
    if not pre.ok:
        raise CoarseScopeError("PRECONDITION_VARIATION", f"f fails (R={r}, eps={eps}) variation: max l1 {pre.max_l1}", pre.worst_pair)
    for p in sorted(a.members):
        if not in_skeleton(f.values[p], n):
            raise CoarseScopeError("A_NOT_IN_SKELETON", f"f({p!r}) has support size {len(f.values[p].weights)} > n+1", p)

    b = neighborhood(a, r)
    folded = {p: fold_point(f.values[p], n) for p in f.domain_ids()}
    r_map = PUMap.from_values(f.space, f.target, folded, validate=False)

    agreement = all(r_map.values[p] is f.values[p] or r_map.values[p].weights == f.values[p].weights for p in a.members)
    carrier_ok = all(carrier(r_map.values[p]) <= carrier(f.values[p]) for p in f.domain_ids())

    pointwise_bound = 2.0 * (2 * n + 1) * eps
    pointwise_ok = all(l1_dist(f.values[p], r_map.values[p]) < pointwise_bound + tol for p in b.members)

    mu = (8 * n + 5) * eps
    if b.members:
        variation = check_variation(r_map.restricted(b), r, mu)
    else:
        variation = VariationReport(True, r, mu, 0.0, None)

    return PushResult(
        r=r_map,
        b_domain=b,
        n=n,
        eps=eps,
        mu_claimed=mu,
        agreement_on_A=agreement,
        carrier_ok=carrier_ok,
        pointwise_ok=pointwise_ok,
        variation=variation,
    )
