import math

import pytest

from coarsescope import (
    CoarseScopeError,
    PropertyAInput,
    SetFamily,
    ball_family,
    build_cx,
    cx_partition,
    property_a_to_pu,
    pu_to_property_a,
    symdiff_ratio,
    worst_ratio,
)
from coarsescope.fixtures import property_a_fixture
from coarsescope.metric_space import path_graph_space
from coarsescope.pu_maps import measure_eps_star


def test_symdiff_ratio_cases():
    sp = path_graph_space(3)
    a, b, c = sp.ids
    fam = SetFamily(sp, 5.0, {a: frozenset({(a, 1)}), b: frozenset({(a, 1)}), c: frozenset({(c, 1)})})
    assert symdiff_ratio(fam, a, b) == 0.0
    assert symdiff_ratio(fam, a, c) == math.inf
    fam2 = SetFamily(sp, 5.0, {a: frozenset({(a, 1), (b, 1)}), b: frozenset({(a, 1)}), c: frozenset({(c, 1)})})
    assert symdiff_ratio(fam2, a, b) == 1.0


def test_ball_family_interior_ratio():
    # P5, S = 3.5: A_2 = {0..4}, A_1 = {0..4} too (all within open 3.5-ball)
    sp = path_graph_space(5)
    fam = ball_family(sp, 3.5, 1)
    # A at the center holds all five points; at the end only four
    assert len(fam.sets[sp.ids[2]]) == 5
    assert len(fam.sets[sp.ids[0]]) == 4
    # |A_0 symdiff A_1| = 1 (point 4), |A_0 cap A_1| = 4 -> 1/4   [adjacent pair]
    assert symdiff_ratio(fam, sp.ids[0], sp.ids[1]) == pytest.approx(0.25)
    worst, pair = worst_ratio(fam, 1.0)
    assert worst == pytest.approx(0.25)


def test_ball_family_depth_scales_counts():
    sp = path_graph_space(4)
    f1 = ball_family(sp, 2.5, 1)
    f3 = ball_family(sp, 2.5, 3)
    for x in sp.ids:
        assert len(f3.sets[x]) == 3 * len(f1.sets[x])
        # ratios are depth-invariant
    assert worst_ratio(f3, 1.0)[0] == pytest.approx(worst_ratio(f1, 1.0)[0])


def test_family_entry_outside_ball_rejected():
    sp = path_graph_space(3)
    a, b, c = sp.ids
    with pytest.raises(CoarseScopeError) as exc:
        SetFamily(sp, 1.0, {a: frozenset({(c, 1)}), b: frozenset({(b, 1)}), c: frozenset({(c, 1)})})
    assert exc.value.code == "BAD_DOCUMENT"


def test_parameter_constraints():
    with pytest.raises(CoarseScopeError):
        PropertyAInput(R=5.0, eps=0.5, M=1, delta=0.5)
    with pytest.raises(CoarseScopeError):
        PropertyAInput(R=5.0, eps=0.5, M=3, delta=1.5)


def test_build_cx_r_too_small():
    fx = property_a_fixture()
    bad = PropertyAInput(R=1.0, eps=0.5, M=3, delta=0.5)
    with pytest.raises(CoarseScopeError) as exc:
        build_cx(fx.family, bad)
    assert exc.value.code == "PARAMETER_CONSTRAINT_FAILED"


def test_build_cx_ball_too_big():
    fx = property_a_fixture()
    bad = PropertyAInput(R=50.0, eps=0.1, M=2, delta=0.1)  # 1/delta = 10 ball has 19 > 2 points
    with pytest.raises(CoarseScopeError) as exc:
        build_cx(fx.family, bad)
    assert exc.value.code == "BALL_TOO_BIG"


def test_build_cx_ratio_precondition():
    sp = path_graph_space(20)
    fam = ball_family(sp, 6.0, 1)  # small balls, big relative symdiff at R=7
    params = PropertyAInput(R=7.0, eps=0.5, M=3, delta=0.5)
    with pytest.raises(CoarseScopeError) as exc:
        build_cx(fam, params)
    assert exc.value.code == "RATIO_PRECONDITION_FAILED"


def test_build_cx_large_regime_on_fixture():
    fx = property_a_fixture()
    res = build_cx(fx.family, fx.params)
    assert res.verdict
    assert set(res.case.values()) == {"large"}


def test_cx_partition_chain_on_fixture():
    fx = property_a_fixture()
    res = build_cx(fx.family, fx.params)
    part = cx_partition(res.cx, fx.space, fx.params)
    assert part.verdict
    assert part.checked_pairs > 0


def test_cx_partition_singleton_distance_two():
    sp = path_graph_space(2)
    a, b = sp.ids
    cx = {a: frozenset({(a, 1)}), b: frozenset({(b, 1)})}
    part = cx_partition(cx, sp, None)
    from coarsescope import l1_dist

    assert l1_dist(part.pumap.values[a], part.pumap.values[b]) == 2.0


def test_cx_partition_counting_example():
    # C_x = {a,a,b}, C_y = {a,b,b} (depth encodes multiplicity):
    # f_x = (2/3, 1/3), f_y = (1/3, 2/3), l1 = 2/3; |symdiff| = 2 and
    # ||3 f_x - 3 f_y||_1 = 2 <= 2
    sp = path_graph_space(2)
    a, b = sp.ids
    cx = {a: frozenset({(a, 1), (a, 2), (b, 1)}), b: frozenset({(a, 1), (b, 1), (b, 2)})}
    params = PropertyAInput(R=5.0, eps=1.0, M=2, delta=0.9)
    part = cx_partition(cx, sp, params)
    assert part.pumap.values[a](a) == pytest.approx(2.0 / 3.0)
    assert part.scaled_l1_ok
    assert part.final_l1_ok


def test_cx_partition_rejects_empty_and_foreign():
    sp = path_graph_space(2)
    a, b = sp.ids
    with pytest.raises(CoarseScopeError) as exc:
        cx_partition({a: frozenset(), b: frozenset({(b, 1)})}, sp)
    assert exc.value.code == "EMPTY_CX"
    with pytest.raises(CoarseScopeError) as exc:
        cx_partition({a: frozenset({("zz", 1)}), b: frozenset({(b, 1)})}, sp)
    assert exc.value.code == "FOREIGN_POINT"


def test_property_a_to_pu_on_cx_partition():
    fx = property_a_fixture()
    res = build_cx(fx.family, fx.params)
    part = cx_partition(res.cx, fx.space, fx.params)
    cert = property_a_to_pu(part.pumap, fx.params.R, fx.params.eps, fx.bound_m)
    assert cert.verdict


def test_property_a_to_pu_support_too_big():
    fx = property_a_fixture()
    res = build_cx(fx.family, fx.params)
    part = cx_partition(res.cx, fx.space, fx.params)
    with pytest.raises(CoarseScopeError) as exc:
        property_a_to_pu(part.pumap, fx.params.R, fx.params.eps, 1.0)
    assert exc.value.code == "SUPPORT_TOO_BIG"


def test_property_a_to_pu_variation_failed():
    fx = property_a_fixture()
    res = build_cx(fx.family, fx.params)
    part = cx_partition(res.cx, fx.space, fx.params)
    with pytest.raises(CoarseScopeError) as exc:
        property_a_to_pu(part.pumap, fx.params.R, 1e-12, fx.bound_m)
    assert exc.value.code == "VARIATION_FAILED"


def test_pu_to_property_a_round():
    fx = property_a_fixture()
    res = build_cx(fx.family, fx.params)
    part = cx_partition(res.cx, fx.space, fx.params)
    data = pu_to_property_a(part.pumap, fx.params.R, fx.params.eps)
    assert data.variation_ok
    assert data.delta == pytest.approx(fx.params.eps / (fx.params.R + 1.0))
    assert data.support_bound <= fx.bound_m
