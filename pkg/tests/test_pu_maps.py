import math

import numpy as np
import pytest

from coarsescope import (
    CoarseScopeError,
    Cover,
    PUMap,
    barycentric_map,
    check_barycentric_bound,
    check_delta_pu,
    check_lipschitz,
    check_variation,
    lebesgue_lower_bound,
    map_lebesgue,
    measure_eps_star,
    measure_lipschitz,
    measure_variation,
    pullback_partition,
    star_preimage_cover,
    stats,
    variation_to_lipschitz,
)
from coarsescope.fixtures import random_cover, random_pumap, random_space
from coarsescope.oracle import oracle_barycentric, oracle_lambda_hat
from coarsescope.pu_maps import RawMap


def test_barycentric_p10_values(p10, p10_two_cover):
    phi = barycentric_map(p10_two_cover)
    ids = list(p10.ids)
    assert phi.values[ids[0]].weights == {"L": 1.0}
    # point 4: f_L = 2 (dist to 6), f_R = 1 (dist to 3)
    assert phi.values[ids[4]]("L") == pytest.approx(2.0 / 3.0)
    assert phi.values[ids[4]]("R") == pytest.approx(1.0 / 3.0)


def test_barycentric_matches_oracle_on_random_covers(rng):
    for _ in range(15):
        space = random_space(rng, int(rng.integers(8, 30)), dim=1, box=8.0)
        cover = random_cover(rng, space)
        phi = barycentric_map(cover)
        expected = oracle_barycentric(space.d.tolist(), {s: {space.index(p) for p in m} for s, m in cover.elements.items()})
        for i, p in enumerate(space.ids):
            for s in cover.index_set:
                assert phi.values[p](s) == pytest.approx(expected[i].get(s, 0.0), abs=1e-9)


def test_barycentric_bound_p10(p10_two_cover):
    rep = check_barycentric_bound(p10_two_cover)
    assert rep.ok
    assert rep.lambda_hat <= 4.0 * 2**2 / 2.0 + 1e-9


def test_full_element_gets_uniform_infinite_weight(p10):
    cover = Cover(p10, {"all": frozenset(p10.ids), "half": frozenset(list(p10.ids)[:5])})
    phi = barycentric_map(cover)
    assert phi.values[p10.ids[0]].weights == {"all": 1.0}


def test_lambda_hat_matches_oracle(rng):
    for _ in range(10):
        space = random_space(rng, int(rng.integers(6, 25)), dim=1)
        f = random_pumap(rng, space, 5)
        lam = measure_lipschitz(f)
        expected = oracle_lambda_hat([f.values[p].weights for p in space.ids], space.d.tolist())
        assert lam == pytest.approx(expected, abs=1e-9)


def test_check_lipschitz_reports_violating_pair(line20):
    values = {p: {"a": 1.0} for p in line20.ids}
    values[line20.ids[0]] = {"b": 1.0}
    f = RawMap(line20, values)
    rep = check_lipschitz(f, 0.01, 0.0)
    assert not rep.ok
    assert rep.worst_pair == (line20.ids[0], line20.ids[1])


def test_variation_to_lipschitz_exact(rng):
    for _ in range(20):
        space = random_space(rng, int(rng.integers(6, 25)), dim=1)
        f = random_pumap(rng, space, 4)
        r = float(rng.uniform(0.5, 4.0))
        var = measure_variation(f, r)
        eps = min(var * (1 + 1e-12) + 1e-12, 2.0)
        if eps <= 0:
            continue
        assert check_variation(f, r, eps).ok
        lam, c = variation_to_lipschitz(r, eps)
        assert check_lipschitz(f, lam, c).ok


def test_variation_to_lipschitz_eps_range():
    with pytest.raises(CoarseScopeError) as exc:
        variation_to_lipschitz(1.0, 2.5)
    assert exc.value.code == "EPS_OUT_OF_RANGE"


def test_lebesgue_lower_bound_formula():
    assert lebesgue_lower_bound(0.1, 0.0, 0) == pytest.approx(10.0)
    assert lebesgue_lower_bound(0.1, 0.25, 1) == pytest.approx((1 - 0.5) / (2 * 0.1))
    with pytest.raises(CoarseScopeError) as exc:
        lebesgue_lower_bound(0.1, 0.6, 1)
    assert exc.value.code == "BOUND_DEGENERATE"


def test_map_lebesgue_bound_holds(rng):
    for _ in range(15):
        space = random_space(rng, int(rng.integers(8, 30)), dim=1)
        n = int(rng.integers(0, 3))
        f = random_pumap(rng, space, 5, n_skeleton=n)
        c = float(rng.uniform(0.0, 0.9 / (n + 1)))
        lam = measure_lipschitz(f, c)
        if lam <= 0:
            continue
        assert map_lebesgue(f) >= lebesgue_lower_bound(lam, c, n) - 1e-9


def test_measure_eps_star_is_tight(rng):
    space = random_space(rng, 12, dim=1)
    f = random_pumap(rng, space, 4)
    eps = measure_eps_star(f)
    assert check_lipschitz(f, eps, eps).ok
    if eps > 1e-9:
        assert not check_lipschitz(f, eps * 0.99, eps * 0.99).ok


def test_delta_pu_certificate_on_barycentric(line20):
    v1 = frozenset(p for p in line20.ids if float(p) <= 12)
    v2 = frozenset(p for p in line20.ids if float(p) >= 7)
    f = barycentric_map(Cover(line20, {"V1": v1, "V2": v2}))
    delta = max(measure_eps_star(f), 1.0 / stats(star_preimage_cover(f)).lebesgue)
    cert = check_delta_pu(f, delta, bound_m=20.0)
    assert cert.verdict


def test_star_preimage_cover_of_barycentric_recovers_cover(p10, p10_two_cover):
    phi = barycentric_map(p10_two_cover)
    induced = star_preimage_cover(phi)
    assert induced.elements["L"] == p10_two_cover.elements["L"]
    assert induced.elements["R"] == p10_two_cover.elements["R"]


def test_uncovered_point_rejected(p10):
    # covers cannot be built uncovering, so hit the barycentric guard via a zero-lebesgue check instead
    from coarsescope.pu_maps import check_barycentric_bound

    ids = list(p10.ids)
    # two elements whose union covers but one point lies in neither interior is impossible on a
    # finite space; assert ZERO_LEBESGUE is unreachable for genuine covers
    cover = Cover(p10, {"L": frozenset(ids[:6]), "R": frozenset(ids[4:])})
    assert check_barycentric_bound(cover).ok


def test_pullback_partition(line20, p10):
    f = barycentric_map(Cover(p10, {"L": frozenset(list(p10.ids)[:6]), "R": frozenset(list(p10.ids)[4:])}))
    g = {p: p10.ids[min(int(float(p)) // 2, 9)] for p in line20.ids}
    res = pullback_partition(g, f, line20, r=2.0, s=1.0)
    assert res.variation.ok


def test_pullback_distortion_violation(line20, p10):
    g = {p: p10.ids[0] for p in line20.ids}
    g[line20.ids[0]] = p10.ids[9]
    with pytest.raises(CoarseScopeError) as exc:
        pullback_partition(g, barycentric_map(Cover(p10, {"all": frozenset(p10.ids)})), line20, r=5.0, s=1.0)
    assert exc.value.code == "DISTORTION_VIOLATED"


def test_sparse_and_dense_scans_agree(rng):
    space = random_space(rng, 40, dim=1, box=30.0)
    # many vertices + tiny supports pushes the scans onto the sparse path
    names = [f"v{j}" for j in range(200)]
    from coarsescope.simplicial import Complex, SimplexPoint

    values = {}
    for i, p in enumerate(space.ids):
        j = int(space.coords[i, 0] * 4) % 199
        t = float(rng.uniform(0.1, 0.9))
        values[p] = SimplexPoint({names[j]: t, names[j + 1]: 1 - t})
    target = Complex.from_simplices(names, (v.support() for v in values.values()))
    f = PUMap(space, target, values)
    from coarsescope.pu_maps import _prefer_sparse

    assert _prefer_sparse(f)
    sparse_rep = check_lipschitz(f, 0.5, 0.5)
    w, d, ids = f.dense()
    from coarsescope import _kernels

    excess, ei, ej, lam_hat, hi, hj = _kernels.lipschitz_scan(w, d, 0.5, 0.5)
    assert sparse_rep.max_excess == pytest.approx(float(excess), abs=1e-12)
    assert sparse_rep.lambda_hat == pytest.approx(float(lam_hat), abs=1e-12)
    assert measure_variation(f, 3.0) == pytest.approx(float(_kernels.variation_scan(w, d, 3.0)[0]), abs=1e-12)
