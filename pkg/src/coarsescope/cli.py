"""Batch command-line front end.

Every run writes a canonical JSON report (sorted keys, byte-stable) and
exits 0 when all certificates pass, 1 when some fail, 2 on input or
parameter errors.  Wall-clock timing goes to stderr only, so reports are
byte-identical across repeated runs with the same inputs and seed.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import __version__
from .asdim import certify_from_cover, estimate_upper_bound, exhaustive_min_n
from .covers import stats
from .errors import CoarseScopeError
from .filler import FillerSchedule, build_filler
from .fixtures import small_fixture
from .io import (
    canonical_json,
    cover_from_doc,
    digest,
    family_from_doc,
    pumap_from_doc,
    pumap_to_doc,
    read_json,
    space_from_doc,
    subset_from_doc,
)
from .oracle import (
    oracle_barycentric,
    oracle_cover_stats,
    oracle_lambda_hat,
    oracle_push,
)
from .property_a import build_cx, cx_partition
from .pu_maps import check_barycentric_bound, barycentric_map, check_delta_pu, measure_variation, star_preimage_cover
from .skeleton_push import fold_point, push_to_skeleton

__all__ = ["main", "run"]


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="coarsescope", description="coarse-geometry certificates on finite metric spaces")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name)
        sp.add_argument("--out", default=None)
        sp.add_argument("--seed", type=int, default=0)
        return sp

    sp = add("analyze")
    sp.add_argument("--space", required=True)
    sp.add_argument("--cover", required=True)

    sp = add("cover")
    sp.add_argument("--space", required=True)
    sp.add_argument("--R", type=float, required=True)
    sp.add_argument("--nmax", type=int, default=4)

    sp = add("barycentric")
    sp.add_argument("--space", required=True)
    sp.add_argument("--cover", required=True)

    sp = add("push")
    sp.add_argument("--space", required=True)
    sp.add_argument("--map", required=True)
    sp.add_argument("--subset", required=True)
    sp.add_argument("--R", type=float, required=True)
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("--eps", type=float, default=None)

    sp = add("filler")
    sp.add_argument("--space", required=True)
    sp.add_argument("--map", required=True)
    sp.add_argument("--subset", required=True)
    sp.add_argument("--cover", required=True)
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("--eps", type=float, required=True)
    sp.add_argument("--M", type=float, default=None)

    sp = add("propa")
    sp.add_argument("--space", required=True)
    sp.add_argument("--family", required=True)
    sp.add_argument("--R", type=float, required=True)
    sp.add_argument("--eps", type=float, required=True)
    sp.add_argument("--M", type=int, required=True)
    sp.add_argument("--delta", type=float, required=True)

    sp = add("asdim")
    sp.add_argument("--space", required=True)
    sp.add_argument("--scales", default="1,2,4,8")
    sp.add_argument("--nmax", type=int, default=4)
    sp.add_argument("--exhaustive", action="store_true")

    sp = add("oracle")
    sp.add_argument("--fixture", default="small")
    sp.add_argument("--k-limit", type=int, default=10**6)
    return p


def _cmd_analyze(args, inputs) -> list[dict]:
    space = space_from_doc(_read(args, "space", inputs))
    cover = cover_from_doc(_read(args, "cover", inputs), space)
    st = stats(cover)
    return [{"kind": "cover_stats", "stats": st.to_dict(), "verdict": True}]


def _read(args, attr, inputs):
    doc = read_json(getattr(args, attr))
    inputs[attr] = digest(doc)
    return doc


def _cmd_cover(args, inputs) -> list[dict]:
    space = space_from_doc(_read(args, "space", inputs))
    n_best, witness = estimate_upper_bound(space, args.R, args.nmax)
    if n_best is None:
        return [{"kind": "cover_witness", "R": args.R, "n_best": None, "verdict": False}]
    cert = certify_from_cover(witness, args.R, n_best)
    return [
        {
            "kind": "cover_witness",
            "R": args.R,
            "n_best": n_best,
            "elements": {s: sorted(m) for s, m in witness.elements.items()},
            "certificate": cert.to_dict(),
            "verdict": cert.verdict,
        }
    ]


def _cmd_barycentric(args, inputs) -> list[dict]:
    space = space_from_doc(_read(args, "space", inputs))
    cover = cover_from_doc(_read(args, "cover", inputs), space)
    report = check_barycentric_bound(cover)
    phi = barycentric_map(cover)
    return [
        {
            "kind": "barycentric_bound",
            "lipschitz": report.to_dict(),
            "map": pumap_to_doc(phi),
            "verdict": report.ok,
        }
    ]


def _cmd_push(args, inputs) -> list[dict]:
    space = space_from_doc(_read(args, "space", inputs))
    f = pumap_from_doc(_read(args, "map", inputs), space)
    a = subset_from_doc(_read(args, "subset", inputs), space)
    eps = args.eps
    if eps is None:
        measured = measure_variation(f, args.R)
        eps = measured if measured > 0 else 0.1
    res = push_to_skeleton(f, a, args.R, args.n, eps)
    verdict = res.agreement_on_A and res.carrier_ok and res.pointwise_ok and res.variation_verified
    return [{"kind": "skeleton_push", "result": res.to_dict(), "map": pumap_to_doc(res.r), "verdict": verdict}]


def _cmd_filler(args, inputs) -> list[dict]:
    space = space_from_doc(_read(args, "space", inputs))
    f = pumap_from_doc(_read(args, "map", inputs), space)
    a = subset_from_doc(_read(args, "subset", inputs), space)
    u_r = cover_from_doc(_read(args, "cover", inputs), space)
    u_stats = stats(u_r)
    k = max(int(u_stats.lebesgue), 1)
    delta = 1.0 / (k * u_stats.mesh)
    schedule = FillerSchedule(
        n=args.n,
        eps=args.eps,
        k=k,
        R=float(k),
        delta=delta,
        mu=(8 * args.n + 5) * (k + 1.0) * delta,
        S_of_k=u_stats.mesh,
    )
    bound_m = args.M if args.M is not None else stats(star_preimage_cover(f)).mesh
    res = build_filler(f, a, args.n, args.eps, u_r, schedule, bound_m)
    return [{"kind": "filler", "result": res.to_dict(), "map": pumap_to_doc(res.h), "verdict": res.verdict}]


def _cmd_propa(args, inputs) -> list[dict]:
    from .property_a import PropertyAInput

    space = space_from_doc(_read(args, "space", inputs))
    family = family_from_doc(_read(args, "family", inputs), space)
    params = PropertyAInput(R=args.R, eps=args.eps, M=args.M, delta=args.delta)
    cx_res = build_cx(family, params)
    part = cx_partition(cx_res.cx, space, params)
    cert = check_delta_pu(part.pumap, args.delta, 4.0 * family.s_radius)
    verdict = cx_res.verdict and part.verdict and cert.verdict
    return [
        {
            "kind": "property_a",
            "construction": cx_res.to_dict(),
            "proof_chain": part.to_dict(),
            "delta_pu": cert.to_dict(),
            "verdict": verdict,
        }
    ]


def _cmd_asdim(args, inputs) -> list[dict]:
    space = space_from_doc(_read(args, "space", inputs))
    scales = [float(s) for s in args.scales.split(",") if s]
    out = []
    for r in scales:
        n_best, witness = estimate_upper_bound(space, r, args.nmax)
        if n_best is None:
            out.append({"kind": "asdim_upper", "R": r, "n_best": None, "verdict": False})
            continue
        cert = certify_from_cover(witness, r, n_best)
        entry = {"kind": "asdim_upper", "R": r, "n_best": n_best, "certificate": cert.to_dict(), "verdict": cert.verdict}
        if args.exhaustive:
            n_exact, _ = exhaustive_min_n(space, r, mesh_bound=float(space.diameter()))
            entry["exhaustive_n"] = n_exact
            entry["verdict"] = entry["verdict"] and n_exact <= n_best
        out.append(entry)
    return out


def _cmd_oracle(args, inputs) -> list[dict]:
    tol = 1e-9
    fx = small_fixture(args.seed)
    space, cover, pumap, n = fx["space"], fx["cover"], fx["pumap"], fx["n"]
    dist = space.d.tolist()
    elements = {s: {space.index(p) for p in m} for s, m in cover.elements.items()}

    st = stats(cover)
    o_leb, o_mult, o_mesh = oracle_cover_stats(dist, elements)
    stats_ok = (
        abs(st.lebesgue - o_leb) <= tol and st.multiplicity == o_mult and abs(st.mesh - o_mesh) <= tol
    )

    phi = barycentric_map(cover)
    o_phi = oracle_barycentric(dist, elements)
    bary_ok = all(
        abs(phi.values[p](s) - o_phi[i].get(s, 0.0)) <= tol for i, p in enumerate(space.ids) for s in cover.index_set
    )

    from .pu_maps import measure_lipschitz

    lam = measure_lipschitz(pumap)
    o_lam = oracle_lambda_hat([pumap.values[p].weights for p in space.ids], dist)
    lam_ok = abs(lam - o_lam) <= tol

    folded = [fold_point(pumap.values[p], n).weights for p in space.ids]
    o_folded = oracle_push([pumap.values[p].weights for p in space.ids], n)
    fold_ok = folded == o_folded  # bit-for-bit

    checks = {
        "cover_stats": stats_ok,
        "barycentric": bary_ok,
        "lambda_hat": lam_ok,
        "fold_bit_identical": fold_ok,
    }
    return [{"kind": "oracle_diff", "fixture": args.fixture, "points": len(space), "checks": checks, "verdict": all(checks.values())}]


_HANDLERS = {
    "analyze": _cmd_analyze,
    "cover": _cmd_cover,
    "barycentric": _cmd_barycentric,
    "push": _cmd_push,
    "filler": _cmd_filler,
    "propa": _cmd_propa,
    "asdim": _cmd_asdim,
    "oracle": _cmd_oracle,
}


def run(argv: list[str]) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    started = time.monotonic()
    inputs: dict[str, str] = {}
    try:
        certificates = _HANDLERS[args.command](args, inputs)
    except CoarseScopeError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = {
        "command": args.command,
        "version": __version__,
        "seed": args.seed,
        "inputs": inputs,
        "certificates": certificates,
        "wall_time": None,  # kept out of the report so reruns are byte-identical
    }
    text = canonical_json(report) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"[coarsescope] {args.command} finished in {time.monotonic() - started:.3f}s", file=sys.stderr)
    return 0 if all(c.get("verdict", False) for c in certificates) else 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
