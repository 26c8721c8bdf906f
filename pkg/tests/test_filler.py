import math

import pytest

from coarsescope import (
    CoarseScopeError,
    Cover,
    PointSet,
    build_alpha,
    build_beta,
    build_filler,
    find_schedule,
    merge_cover_by_assignment,
    stats,
)
from coarsescope.filler import _schedule_at
from coarsescope.fixtures import theorem_a_fixture
from coarsescope.metric_space import line_space


def test_schedule_inequalities_are_what_find_schedule_enforces():
    sched = find_schedule(0, 1.0, lambda k: 2.0 * k)
    assert sched.all_ok()
    # the previous k must fail at least one inequality (minimality)
    if sched.k > 1:
        prev = _schedule_at(0, 1.0, sched.k - 1, 2.0 * (sched.k - 1))
        assert not prev.all_ok()


def test_schedule_values_consistent():
    sched = find_schedule(1, 0.5, lambda k: 4.0 * k)
    assert sched.R == float(sched.k)
    assert sched.delta == pytest.approx(1.0 / (sched.k * sched.S_of_k))
    assert sched.mu == pytest.approx((8 * sched.n + 5) * (sched.R + 1) * sched.delta)


def test_schedule_not_found():
    with pytest.raises(CoarseScopeError) as exc:
        find_schedule(0, 1e-9, lambda k: 2.0 * k, k_limit=50)
    assert exc.value.code == "SCHEDULE_NOT_FOUND"


def test_build_alpha_extremes_and_lipschitz():
    space = line_space([float(i) for i in range(30)])
    a = PointSet(space, frozenset(p for p in space.ids if float(p) <= 4))
    res = build_alpha(space, a, 3.0)
    # alpha = 1 on A (distance to the complement of B(A,R) is >= R there)
    assert all(res.alpha[p] == 1.0 for p in a.members)
    # alpha = 0 far away: points at distance >= 2R from A sit deep in Q only
    far = [p for p in space.ids if float(p) >= 4 + 6]
    assert all(res.alpha[p] == 0.0 for p in far)
    assert res.lipschitz.ok
    assert res.cover_lebesgue_ok


def test_build_alpha_empty_and_full():
    space = line_space([0.0, 1.0, 2.0])
    empty = build_alpha(space, PointSet(space, frozenset()), 1.0)
    assert set(empty.alpha.values()) == {0.0}
    full = build_alpha(space, PointSet(space, frozenset(space.ids)), 1.0)
    assert set(full.alpha.values()) == {1.0}


def _tiny_filler_inputs():
    fx = theorem_a_fixture(0, 1.0)
    return fx


def test_merge_cover_properties():
    fx = _tiny_filler_inputs()
    sched = fx.schedule
    merge = merge_cover_by_assignment(fx.u_r, fx.f, sched.delta)
    assert merge.multiplicity_ok
    assert merge.lebesgue_ok
    assert merge.star_inclusion_ok
    assert set(merge.cover.elements) <= set(fx.f.vertex_order())


def test_merge_mesh_precondition():
    fx = _tiny_filler_inputs()
    with pytest.raises(CoarseScopeError) as exc:
        merge_cover_by_assignment(fx.u_r, fx.f, 10.0)
    assert exc.value.code == "PRECONDITION_MESH"


def test_build_beta_support_and_lebesgue():
    fx = _tiny_filler_inputs()
    merge = merge_cover_by_assignment(fx.u_r, fx.f, fx.schedule.delta)
    beta = build_beta(merge.cover, fx.f, fx.schedule.R)
    assert beta.support_ok
    assert beta.lebesgue_ok


def test_build_filler_end_to_end_smallest_config():
    fx = _tiny_filler_inputs()
    res = build_filler(fx.f, fx.a, 0, 1.0, fx.u_r, fx.schedule, fx.bound_m)
    assert res.verdict
    # h agrees with f on A bitwise
    for p in fx.a.members:
        assert res.h.values[p].weights == fx.f.values[p].weights


def test_build_filler_rejects_mismatched_schedule():
    fx = _tiny_filler_inputs()
    with pytest.raises(CoarseScopeError) as exc:
        build_filler(fx.f, fx.a, 1, 1.0, fx.u_r, fx.schedule, fx.bound_m)
    assert exc.value.code == "BAD_PARAMETER"


def test_build_filler_cover_precondition():
    fx = _tiny_filler_inputs()
    bad = Cover(fx.space, {"all": frozenset(fx.space.ids)})
    with pytest.raises(CoarseScopeError) as exc:
        build_filler(fx.f, fx.a, 0, 1.0, bad, fx.schedule, fx.bound_m)
    assert exc.value.code == "PRECONDITION_COVER"
