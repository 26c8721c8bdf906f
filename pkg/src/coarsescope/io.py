"""JSON document loading, canonical serialization and input digests.

Document shapes:
  space     {"format": "matrix"|"euclidean"|"graph", "ids": [...], "data": ...}
  cover     {"elements": {"s1": [ids], ...}}
  complex   {"vertices": [...], "maximal_simplices": [[...], ...]}
  pumap     {"complex": <complex doc, optional>, "values": {"x": {"v": w}}}
  subset    {"members": [ids]} or a bare list
  family    {"S": real, "sets": {"x": [["y", i], ...]}}

Cover/pumap/subset/family documents either embed the space under "space" or
are loaded against one supplied by the caller.  Serialization is canonical:
sorted keys, fixed separators, +/-inf written as the strings "inf"/"-inf".
"""

from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path
from typing import Any

from .covers import Cover
from .errors import CoarseScopeError, require
from .metric_space import FiniteMetricSpace, PointSet, load_space
from .property_a import SetFamily
from .pu_maps import PUMap
from .simplicial import Complex, SimplexPoint

__all__ = [
    "read_json",
    "canonical_json",
    "write_json",
    "digest",
    "space_from_doc",
    "cover_from_doc",
    "complex_from_doc",
    "complex_to_doc",
    "pumap_from_doc",
    "pumap_to_doc",
    "subset_from_doc",
    "family_from_doc",
]


def read_json(path: str | Path) -> Any:
    p = Path(path)
    if not p.is_file():
        raise CoarseScopeError("BAD_DOCUMENT", f"no such file: {p}")
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise CoarseScopeError("BAD_DOCUMENT", f"{p}: invalid JSON ({exc})") from exc


def _jsonable(value: Any) -> Any:
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            raise CoarseScopeError("BAD_DOCUMENT", "NaN is not serializable")
        return value
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted(_jsonable(v) for v in value)
    return value


def canonical_json(value: Any) -> str:
    """Byte-stable rendering: sorted keys, no float Infinity literals."""
    return json.dumps(_jsonable(value), sort_keys=True, separators=(",", ":"), allow_nan=False)


def write_json(path: str | Path, value: Any) -> None:
    Path(path).write_text(canonical_json(value) + "\n")


def digest(value: Any) -> str:
    return hashlib.sha256(canonical_json(value).encode()).hexdigest()


def _resolve_space(doc: dict, space: FiniteMetricSpace | None) -> FiniteMetricSpace:
    if space is not None:
        return space
    inline = doc.get("space")
    require(isinstance(inline, dict), "BAD_DOCUMENT", "document needs an inline space or a caller-supplied one")
    return load_space(inline)


def space_from_doc(doc: dict) -> FiniteMetricSpace:
    require(isinstance(doc, dict), "BAD_DOCUMENT", "space document must be an object")
    return load_space(doc)


def cover_from_doc(doc: dict, space: FiniteMetricSpace | None = None) -> Cover:
    require(isinstance(doc, dict) and isinstance(doc.get("elements"), dict), "BAD_DOCUMENT", "cover document needs an elements object")
    sp = _resolve_space(doc, space)
    elements = {str(s): frozenset(str(p) for p in members) for s, members in doc["elements"].items()}
    return Cover(sp, elements, label=str(doc.get("label", "")))


def complex_from_doc(doc: dict) -> Complex:
    require(isinstance(doc, dict) and "vertices" in doc, "BAD_DOCUMENT", "complex document needs vertices")
    return Complex.from_simplices(doc["vertices"], doc.get("maximal_simplices", []))


def complex_to_doc(cx: Complex) -> dict:
    return {
        "vertices": sorted(cx.vertices),
        "maximal_simplices": sorted(sorted(m) for m in cx.maximal_simplices),
    }


def pumap_from_doc(doc: dict, space: FiniteMetricSpace | None = None) -> PUMap:
    require(isinstance(doc, dict) and isinstance(doc.get("values"), dict), "BAD_DOCUMENT", "pumap document needs a values object")
    sp = _resolve_space(doc, space)
    values = {}
    for x, weights in doc["values"].items():
        require(isinstance(weights, dict), "BAD_DOCUMENT", f"values[{x!r}] must be an object", x)
        values[str(x)] = SimplexPoint({str(v): float(w) for v, w in weights.items()})
    if "complex" in doc:
        target = complex_from_doc(doc["complex"])
    else:
        verts = set().union(*(p.support() for p in values.values())) if values else set()
        target = Complex.from_simplices(verts, (p.support() for p in values.values()))
    domain = None
    if set(values) != set(sp.ids):
        domain = PointSet(sp, frozenset(values))
    return PUMap(sp, target, values, domain)


def pumap_to_doc(f: PUMap) -> dict:
    return {
        "complex": complex_to_doc(f.target),
        "values": {x: dict(f.values[x].weights) for x in f.domain_ids()},
    }


def subset_from_doc(doc: Any, space: FiniteMetricSpace) -> PointSet:
    members = doc.get("members") if isinstance(doc, dict) else doc
    require(isinstance(members, list), "BAD_DOCUMENT", "subset document must be a list or {\"members\": [...]}")
    return PointSet(space, frozenset(str(p) for p in members))


def family_from_doc(doc: dict, space: FiniteMetricSpace | None = None) -> SetFamily:
    require(isinstance(doc, dict) and isinstance(doc.get("sets"), dict), "BAD_DOCUMENT", "family document needs a sets object")
    sp = _resolve_space(doc, space)
    sets = {}
    for x, entries in doc["sets"].items():
        sets[str(x)] = frozenset((str(y), int(i)) for y, i in entries)
    return SetFamily(sp, float(doc["S"]), sets)
