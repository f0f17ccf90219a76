"""
JSON forms of groupoids, functors, spans and groupoids-over.

groupoid:  {"objects": [0..n-1], "morphisms": [{"id", "src", "tgt"}],
            "identity": {obj: mor}, "compose": [[g, f, g∘f]], "inverse": {mor: mor}}
           or the shorthand {"finite_sets": N} for the truncated groupoid of finite sets
functor:   {"objects": {id: id}, "morphisms": {id: id}, "source": ref, "target": ref}
span:      {"apex": groupoid, "left": functor, "right": functor}
over:      {"total": groupoid, "base": groupoid, "projection": functor}

Inside a span a functor's ``source`` is the string "apex"; inside an over
object the projection's endpoints may be "total" and "base".
"""

from __future__ import annotations

import json
from typing import Any

from .errors import StructureError
from .groupoid import FiniteGroupoid, Functor, Groupoid, materialize
from .span import GroupoidOver, Span


def _int(x: Any, what: str) -> int:
    try:
        return int(x)
    except (TypeError, ValueError):
        raise StructureError(f"{what}: expected an integer id, got {x!r}") from None


def groupoid_from_json(d: Any) -> Groupoid:
    if not isinstance(d, dict):
        raise StructureError("groupoid must be a JSON object")
    if "finite_sets" in d:
        from .oscillator import build_E
        return build_E(_int(d["finite_sets"], "finite_sets"))
    try:
        objects = [_int(x, "object") for x in d["objects"]]
        morphisms = d["morphisms"]
        identity = d["identity"]
        compose = d["compose"]
        inverse = d["inverse"]
    except KeyError as e:
        raise StructureError(f"groupoid is missing {e.args[0]!r}") from None
    n = len(objects)
    if sorted(objects) != list(range(n)):
        raise StructureError("object ids must be 0..n-1")
    m = len(morphisms)
    src, tgt = [-1] * m, [-1] * m
    for rec in morphisms:
        i = _int(rec.get("id"), "morphism id")
        if not 0 <= i < m or src[i] != -1:
            raise StructureError(f"morphism id {i} is out of range or repeated")
        src[i] = _int(rec.get("src"), "src")
        tgt[i] = _int(rec.get("tgt"), "tgt")
    ident = [-1] * n
    for k, v in identity.items():
        x = _int(k, "identity key")
        if not 0 <= x < n:
            raise StructureError(f"identity given for unknown object {x}")
        ident[x] = _int(v, "identity")
    inv = [-1] * m
    for k, v in inverse.items():
        f = _int(k, "inverse key")
        if not 0 <= f < m:
            raise StructureError(f"inverse given for unknown morphism {f}")
        inv[f] = _int(v, "inverse")
    table = {}
    for row in compose:
        if len(row) != 3:
            raise StructureError("compose rows are [g, f, g∘f]")
        g, f, h = (_int(v, "compose") for v in row)
        table[g, f] = h
    return FiniteGroupoid(n, src, tgt, ident, inv, table)


def groupoid_to_json(G: Groupoid) -> dict:
    F = G if isinstance(G, FiniteGroupoid) else materialize(G)
    return {
        "objects": list(range(F.num_objects)),
        "morphisms": [{"id": i, "src": F.src[i], "tgt": F.tgt[i]} for i in range(len(F.src))],
        "identity": {str(x): F.ident[x] for x in range(F.num_objects)},
        "compose": sorted([g, f, h] for (g, f), h in F.table.items()),
        "inverse": {str(i): F.inv[i] for i in range(len(F.inv))},
    }


def functor_from_json(d: Any, refs: dict[str, Groupoid]) -> Functor:
    def resolve(r):
        if isinstance(r, str):
            if r not in refs:
                raise StructureError(f"unknown groupoid reference {r!r}")
            return refs[r]
        return groupoid_from_json(r)

    try:
        S, T = resolve(d["source"]), resolve(d["target"])
        obj_map = {_int(k, "object"): _int(v, "object") for k, v in d["objects"].items()}
        mor_map = {_int(k, "morphism"): _int(v, "morphism") for k, v in d["morphisms"].items()}
    except KeyError as e:
        raise StructureError(f"functor is missing {e.args[0]!r}") from None
    if set(obj_map) != set(S.objects) or set(mor_map) != set(S.morphisms()):
        raise StructureError("functor maps must cover every object and morphism of the source")
    if any(not 0 <= y < T.num_objects for y in obj_map.values()):
        raise StructureError("functor sends an object outside the target")
    if any(not 0 <= y < T.num_morphisms() for y in mor_map.values()):
        raise StructureError("functor sends a morphism outside the target")
    return Functor(S, T, [obj_map[x] for x in S.objects], [mor_map[m] for m in S.morphisms()])


def functor_to_json(F: Functor, source_ref: Any, target_ref: Any) -> dict:
    S = F.source
    return {"objects": {str(x): F.ob(x) for x in S.objects},
            "morphisms": {str(m): F.mor(m) for m in S.morphisms()},
            "source": source_ref, "target": target_ref}


def _shared(refs_json: list[Any]) -> dict[str, Groupoid]:
    """Parse distinct embedded groupoids once so equal boundaries share one object."""
    cache: dict[str, Groupoid] = {}
    for r in refs_json:
        if isinstance(r, dict):
            key = json.dumps(r, sort_keys=True)
            if key not in cache:
                cache[key] = groupoid_from_json(r)
    return cache


def _functor_shared(d: dict, refs: dict[str, Groupoid], cache: dict[str, Groupoid]) -> Functor:
    local = dict(refs)
    d = dict(d)
    for end in ("source", "target"):
        r = d.get(end)
        if isinstance(r, dict):
            key = json.dumps(r, sort_keys=True)
            local[key] = cache[key]
            d[end] = key
    return functor_from_json(d, local)


def span_from_json(d: Any) -> Span:
    if not isinstance(d, dict) or not {"apex", "left", "right"} <= set(d):
        raise StructureError("span needs apex, left and right")
    apex = groupoid_from_json(d["apex"])
    cache = _shared([d["left"].get("target"), d["right"].get("target")])
    refs = {"apex": apex}
    left = _functor_shared(d["left"], refs, cache)
    right = _functor_shared(d["right"], refs, cache)
    return Span(apex, left, right)


def span_to_json(S: Span) -> dict:
    apex = S.apex if isinstance(S.apex, FiniteGroupoid) else materialize(S.apex)
    return {"apex": groupoid_to_json(apex),
            "left": functor_to_json(S.left, "apex", groupoid_to_json(S.codomain)),
            "right": functor_to_json(S.right, "apex", groupoid_to_json(S.domain))}


def over_from_json(d: Any) -> GroupoidOver:
    if not isinstance(d, dict) or not {"total", "base", "projection"} <= set(d):
        raise StructureError("groupoid over X needs total, base and projection")
    total = groupoid_from_json(d["total"])
    base = groupoid_from_json(d["base"])
    proj = dict(d["projection"])
    proj.setdefault("source", "total")
    proj.setdefault("target", "base")
    F = functor_from_json(proj, {"total": total, "base": base})
    if F.source is not total or F.target is not base:
        raise StructureError("projection must run from 'total' to 'base'")
    return GroupoidOver(total, base, F)


def over_to_json(v: GroupoidOver) -> dict:
    return {"total": groupoid_to_json(v.total), "base": groupoid_to_json(v.base),
            "projection": functor_to_json(v.projection, "total", "base")}


def load(path: str) -> Any:
    with open(path) as fh:
        return json.load(fh)


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)
