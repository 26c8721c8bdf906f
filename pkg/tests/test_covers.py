import math

import numpy as np
import pytest

from coarsescope import CoarseScopeError, Cover, brick_cover, brick_mesh_bound, greedy_cover, member_distance, stats
from coarsescope.fixtures import random_cover, random_space
from coarsescope.oracle import oracle_cover_stats


def _oracle_stats(cover):
    dist = cover.space.d.tolist()
    elements = {s: {cover.space.index(p) for p in m} for s, m in cover.elements.items()}
    return oracle_cover_stats(dist, elements)


def test_p10_two_interval_stats(p10, p10_two_cover):
    st = stats(p10_two_cover)
    o_leb, o_mult, o_mesh = _oracle_stats(p10_two_cover)
    assert st.lebesgue == o_leb == 2.0
    assert st.multiplicity == o_mult == 2
    assert st.mesh == o_mesh == 5.0


def test_member_distance_cases(p10, p10_two_cover):
    ids = list(p10.ids)
    assert member_distance(p10_two_cover, "L", ids[0]) == 6.0
    assert member_distance(p10_two_cover, "L", ids[7]) == 0.0
    with pytest.raises(CoarseScopeError) as exc:
        member_distance(p10_two_cover, "nope", ids[0])
    assert exc.value.code == "UNKNOWN_INDEX"


def test_full_element_gives_infinite_lebesgue(p10):
    st = stats(Cover(p10, {"all": frozenset(p10.ids)}))
    assert st.lebesgue == math.inf
    assert st.multiplicity == 1


def test_not_a_cover_witness(p10):
    with pytest.raises(CoarseScopeError) as exc:
        Cover(p10, {"L": frozenset(list(p10.ids)[:5])})
    assert exc.value.code == "NOT_A_COVER"
    assert exc.value.witness == p10.ids[5]


def test_stats_match_oracle_on_random_covers(rng):
    for _ in range(25):
        space = random_space(rng, int(rng.integers(8, 40)), dim=int(rng.integers(1, 3)), box=8.0)
        cover = random_cover(rng, space)
        st = stats(cover)
        o_leb, o_mult, o_mesh = _oracle_stats(cover)
        assert st.lebesgue == pytest.approx(o_leb, abs=1e-9)
        assert st.multiplicity == o_mult
        assert st.mesh == pytest.approx(o_mesh, abs=1e-9)


def test_brick_cover_guarantees(line20):
    u = brick_cover(line20, 2.0, 1)
    st = stats(u)
    assert st.multiplicity <= 2
    assert st.lebesgue >= 2.0
    assert st.mesh <= brick_mesh_bound(2.0, 1) + 1e-9


def test_brick_cover_2d_guarantees():
    from coarsescope import load_space

    pts = [[float(i), float(j)] for i in range(8) for j in range(8)]
    ids = [str(k).zfill(2) for k in range(len(pts))]
    sp = load_space({"format": "euclidean", "ids": ids, "data": pts})
    u = brick_cover(sp, 1.0, 2)
    st = stats(u)
    assert st.multiplicity <= 3
    assert st.lebesgue >= 1.0
    assert st.mesh <= brick_mesh_bound(1.0, 2) + 1e-9


def test_brick_cover_needs_coords(p10):
    with pytest.raises(CoarseScopeError) as exc:
        brick_cover(p10, 1.0, 1)
    assert exc.value.code == "NOT_EUCLIDEAN"


def test_greedy_cover_p10_examples(p10):
    good = greedy_cover(p10, 1.0, 2)
    assert good.ok and good.multiplicity <= 2 and good.lebesgue >= 1.0
    bad = greedy_cover(p10, 1.0, 1)
    assert not bad.ok and bad.multiplicity == 2


def test_greedy_cover_deterministic(p10):
    a = greedy_cover(p10, 1.0, 2)
    b = greedy_cover(p10, 1.0, 2)
    assert a.cover.elements == b.cover.elements
