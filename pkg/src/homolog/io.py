"""JSON encodings of objects, morphisms, couples, filtered complexes and towers.

Every document carries ``"schema": "homolog/1"``.  Encodings are canonical
(sorted keys, sorted element lists) so that equal inputs give byte-identical
output.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .actions import ACT, ACT_PRIME, NAC, act_map, action, to_prime
from .core import AuditReport, Category, CategoryError
from .couples import (
    Couple,
    FilteredComplex,
    SpectralPage,
    Tower,
    TowerLevel,
    bigraded_couple,
    ungraded_couple,
)
from .finite import (
    FinGroup,
    FinLattice,
    FrozenMap,
    GroupError,
    LatticeError,
    cyclic,
    dihedral,
    elementary_abelian,
    lattice_from_leq,
    quaternion,
    symmetric_group,
    trivial_group,
)
from .ltc import LTC, from_lower
from .pairs import GP, GP2, NGP, QCAT, SET2, SETPT, Arrow, GroupPair, PointedSet, SetPair, hom_arrow, pair_map, set_pair_map

SCHEMA = "homolog/1"

INSTANCES: dict[str, Category] = {
    "Set2": SET2,
    "Set*": SETPT,
    "Gp": GP,
    "Gp2": GP2,
    "Q": QCAT,
    "Ngp": NGP,
    "Ltc": LTC,
    "Act": ACT,
    "Act'": ACT_PRIME,
    "Nac": NAC,
}


class SchemaError(ValueError):
    pass


def instance(name: str) -> Category:
    try:
        return INSTANCES[name]
    except KeyError:
        raise SchemaError(f"unknown instance {name!r}; expected one of {sorted(INSTANCES)}") from None


def instance_name(C: Category) -> str:
    for k, v in INSTANCES.items():
        if v is C:
            return k
    raise SchemaError(f"category {C.name} is not registered")


def dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def load(path: str | Path) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("top level must be a JSON object")
    if doc.get("schema") != SCHEMA:
        raise SchemaError(f"expected \"schema\": \"{SCHEMA}\", got {doc.get('schema')!r}")
    return doc


def require(d: dict, key: str):
    if not isinstance(d, dict) or key not in d:
        raise SchemaError(f"missing field {key!r}")
    return d[key]


def _pairs(fn: FrozenMap) -> list:
    return [[k, v] for k, v in fn.items_sorted()]


def _fn(rows) -> FrozenMap:
    try:
        return FrozenMap((int(k), int(v)) for k, v in rows)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"a map must be a list of [key, value] integer pairs: {exc}") from exc


# ---------------------------------------------------------------- groups and lattices

_NAMED = {
    "cyclic": cyclic,
    "elementary_abelian": elementary_abelian,
    "symmetric": symmetric_group,
    "dihedral": dihedral,
}


def encode_group(g: FinGroup) -> dict:
    return {"name": g.name, "table": [list(r) for r in g.table]}


def decode_group(d) -> FinGroup:
    if not isinstance(d, dict):
        raise SchemaError("a group is a JSON object")
    try:
        if "table" in d:
            return FinGroup(d["table"], d.get("name", ""))
        for key, make in _NAMED.items():
            if key in d:
                return make(int(d[key]))
        if d.get("quaternion"):
            return quaternion()
        if d.get("trivial"):
            return trivial_group()
    except GroupError as exc:
        raise SchemaError(f"invalid group: {exc}") from exc
    raise SchemaError("a group needs a 'table' or one of " + ", ".join(sorted(_NAMED)))


def encode_lattice(x: FinLattice) -> dict:
    return {"leq": [[int(b) for b in row] for row in x.leq]}


def decode_lattice(d) -> FinLattice:
    try:
        return lattice_from_leq(require(d, "leq"))
    except LatticeError as exc:
        raise SchemaError(f"invalid lattice: {exc}") from exc


# ---------------------------------------------------------------- objects


def encode_object(C: Category, a) -> dict:
    if C is SET2:
        return {"X": sorted(a.X), "X0": sorted(a.X0)}
    if C is SETPT:
        return {"points": sorted(a.points)}
    if C is GP:
        return encode_group(a)
    if C in (GP2, QCAT, NGP):
        return {"group": encode_group(a.group), "top": sorted(a.top), "sub": sorted(a.sub)}
    if C is LTC:
        return encode_lattice(a)
    if C in (ACT, ACT_PRIME, NAC):
        return {
            "group": encode_group(a.group),
            "points": sorted(a.points),
            "top": sorted(a.top),
            "act": [[x, s, y] for (x, s), y in a.act.items_sorted()],
        }
    raise SchemaError(f"no encoding for {C.name}")


def decode_object(C: Category, d):
    try:
        if C is SET2:
            return SetPair(frozenset(require(d, "X")), frozenset(require(d, "X0")))
        if C is SETPT:
            return PointedSet(frozenset(require(d, "points")))
        if C is GP:
            return decode_group(d)
        if C in (GP2, QCAT, NGP):
            g = decode_group(require(d, "group"))
            p = GroupPair(g, frozenset(d.get("top", g.elements)), frozenset(d.get("sub", [0])))
            p.validate()
            return p
        if C is LTC:
            return decode_lattice(d)
        if C in (ACT, ACT_PRIME, NAC):
            g = decode_group(require(d, "group"))
            table = {(int(x), int(s)): int(y) for x, s, y in require(d, "act")}
            a = action(require(d, "points"), g, table, top=d.get("top"))
            return a if C is ACT else to_prime(a)
    except (CategoryError, TypeError, ValueError) as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(f"invalid {C.name} object: {exc}") from exc
    raise SchemaError(f"no encoding for {C.name}")


# ---------------------------------------------------------------- morphisms


def encode_map(C: Category, f) -> dict:
    """The data of f without its ends."""
    if C is LTC:
        return {"lower": list(f.lower)}
    if C in (ACT, ACT_PRIME, NAC):
        return {"fp": _pairs(f.fp), "fs": _pairs(f.fs)}
    return {"map": _pairs(f.fn)}


def decode_map(C: Category, dom, cod, d):
    try:
        if C is LTC:
            return from_lower(dom, cod, [int(x) for x in require(d, "lower")])
        if C in (ACT, ACT_PRIME, NAC):
            return act_map(dom, cod, _fn(require(d, "fp")), _fn(require(d, "fs")), quasi=C is not ACT)
        fn = _fn(require(d, "map"))
        if C is SET2:
            return set_pair_map(dom, cod, fn)
        if C is SETPT:
            if set(fn) != dom.points or not set(fn.values()) <= cod.points or fn.get(0) != 0:
                raise CategoryError("not a map of pointed sets")
            return Arrow(dom, cod, fn)
        if C is GP:
            return hom_arrow(dom, cod, fn)
        return pair_map(dom, cod, fn, kind="Gp2" if C is GP2 else "Q")
    except CategoryError as exc:
        raise SchemaError(f"invalid {C.name} morphism: {exc}") from exc


def encode_morphism(C: Category, f) -> dict:
    return {"dom": encode_object(C, C.dom(f)), "cod": encode_object(C, C.cod(f)), **encode_map(C, f)}


def decode_morphism(C: Category, d):
    return decode_map(C, decode_object(C, require(d, "dom")), decode_object(C, require(d, "cod")), d)


def encode_label(x):
    if isinstance(x, frozenset):
        return sorted(x)
    return x


def decode_label(C: Category, x):
    if C is LTC:
        return int(x)
    return frozenset(x)


def encode_report(rep: AuditReport) -> dict:
    return {"axiom": rep.axiom, "status": rep.status, "checked": rep.checked, "counterexample": rep.counterexample}


# ---------------------------------------------------------------- couples


def _key(x: tuple) -> str:
    return ",".join(str(i) for i in x)


def _pos(key: str) -> tuple:
    if key == "":
        return ()
    try:
        return tuple(int(v) for v in key.split(","))
    except ValueError:
        raise SchemaError(f"bad position {key!r}") from None


def encode_couple(c: Couple, window=None) -> dict:
    """The couple restricted to a finite set of positions, as an input document."""
    C = c.category
    ps = list(c.window if window is None else window)
    graded = ps != [()]
    inside = set(ps)
    doc: dict = {
        "schema": SCHEMA,
        "kind": "couple",
        "instance": instance_name(C),
        "graded": graded,
        "horizon": c.horizon,
        "quasi": c.quasi,
        "shifts": {"u": list(c.su), "v": list(c.sv), "del": list(c.sd)},
        "objects": {"D": {}, "E": {}},
        "u": {},
        "v": {},
        "del": {},
    }
    shift = lambda x, s, k=1: tuple(a + k * b for a, b in zip(x, s))
    for x in ps:
        doc["objects"]["D"][_key(x)] = encode_object(C, c.D(x))
        if c.has_E(x):
            doc["objects"]["E"][_key(x)] = encode_object(C, c.E(x))
    for x in ps:
        if shift(x, c.su, -1) in inside:
            doc["u"][_key(x)] = encode_map(C, c.u(x))
        if c.has_E(x):
            if shift(x, c.sv, -1) in inside:
                doc["v"][_key(x)] = encode_map(C, c.v(x))
            if shift(x, c.sd) in inside:
                doc["del"][_key(x)] = encode_map(C, c.d(x))
    return doc


def decode_couple(doc: dict) -> Couple:
    C = instance(require(doc, "instance"))
    objs = require(doc, "objects")
    D = {_pos(k): decode_object(C, v) for k, v in require(objs, "D").items()}
    E = {_pos(k): decode_object(C, v) for k, v in objs.get("E", {}).items()}
    shifts = doc.get("shifts", {})
    graded = bool(doc.get("graded", any(k != () for k in D)))
    if not graded:
        if () not in D or () not in E:
            raise SchemaError("an ungraded couple needs objects D and E at position \"\"")
        d_obj, e_obj = D[()], E[()]
        u = decode_map(C, d_obj, d_obj, require(require(doc, "u"), ""))
        v = decode_map(C, d_obj, e_obj, require(require(doc, "v"), ""))
        d = decode_map(C, e_obj, d_obj, require(require(doc, "del"), ""))
        return ungraded_couple(C, d_obj, e_obj, u, v, d, horizon=doc.get("horizon"))
    su = tuple(shifts.get("u", (0, 1)))
    sv = tuple(shifts.get("v", (0, 0)))
    sd = tuple(shifts.get("del", (-1, -1)))
    z = C.zero_object()
    shift = lambda x, s, k=1: tuple(a + k * b for a, b in zip(x, s))
    u = {}
    for k, m in doc.get("u", {}).items():
        x = _pos(k)
        u[x] = decode_map(C, D.get(shift(x, su, -1), z), D.get(x, z), m)
    v = {}
    for k, m in doc.get("v", {}).items():
        e = _pos(k)
        v[e] = decode_map(C, D.get(shift(e, sv, -1), z), E.get(e, z), m)
    d = {}
    for k, m in doc.get("del", {}).items():
        e = _pos(k)
        d[e] = decode_map(C, E.get(e, z), D.get(shift(e, sd), z), m)
    return bigraded_couple(C, D, E, u, v, d, horizon=int(doc.get("horizon", 2)), quasi=bool(doc.get("quasi", False)),
                           shifts=(su, sv, sd))


def encode_complex(fc: FilteredComplex) -> dict:
    return {"schema": SCHEMA, "kind": "filtered_complex",
            "levels": [list(x) for x in fc.levels], "diff": [list(x) for x in fc.diff]}


def decode_complex(doc: dict) -> FilteredComplex:
    try:
        return FilteredComplex(tuple(require(doc, "levels")), tuple(require(doc, "diff")))
    except (CategoryError, TypeError) as exc:
        raise SchemaError(f"invalid filtered complex: {exc}") from exc


def _int_keys(d: dict) -> dict:
    return {int(k): v for k, v in d.items()}


def encode_tower(t: Tower) -> dict:
    levels = []
    for lv in t.levels:
        a = lv.fibre_action
        levels.append({
            "pi_X": {str(n): encode_group(g) for n, g in sorted(lv.pi_X.items())},
            "pi0_X": lv.pi0_X,
            "pi_F": {str(n): encode_group(g) for n, g in sorted(lv.pi_F.items())},
            "fibre_action": {"points": sorted(a.points),
                             "act": [[x, s, y] for (x, s), y in a.act.items_sorted()]},
            "f": {str(n): _pairs(FrozenMap(m)) for n, m in sorted(lv.f.items())},
            "i": {str(n): _pairs(FrozenMap(m)) for n, m in sorted(lv.i.items())},
            "b": {str(n): _pairs(FrozenMap(m)) for n, m in sorted(lv.b.items())},
        })
    return {"schema": SCHEMA, "kind": "tower", "levels": levels}


def decode_tower(doc: dict) -> Tower:
    levels = []
    below = trivial_group()
    try:
        for lv in require(doc, "levels"):
            pi_X = {n: decode_group(g) for n, g in _int_keys(require(lv, "pi_X")).items()}
            pi_F = {n: decode_group(g) for n, g in _int_keys(lv.get("pi_F", {})).items()}
            fa = require(lv, "fibre_action")
            table = {(int(x), int(s)): int(y) for x, s, y in require(fa, "act")}
            fibre = action(require(fa, "points"), below, table)
            levels.append(TowerLevel(
                pi_X=pi_X, pi0_X=int(lv.get("pi0_X", 1)), pi_F=pi_F, fibre_action=fibre,
                f={n: dict(_fn(m)) for n, m in _int_keys(lv.get("f", {})).items()},
                i={n: dict(_fn(m)) for n, m in _int_keys(lv.get("i", {})).items()},
                b={n: dict(_fn(m)) for n, m in _int_keys(lv.get("b", {})).items()},
            ))
            below = pi_X.get(1, trivial_group())
    except CategoryError as exc:
        raise SchemaError(f"invalid tower: {exc}") from exc
    return Tower(tuple(levels))


# ---------------------------------------------------------------- pages


def encode_pages(c: Couple, pages: list[SpectralPage]) -> list:
    out = []
    for page in pages:
        entries = []
        for e in sorted(page.entries):
            s = page.entries[e]
            de = page.differentials.get(e)
            entries.append({
                "pos": list(e),
                "num": encode_label(s.num),
                "den": encode_label(s.den),
                "order": page.size(e),
                "target": list(page.targets[e]) if e in page.targets else None,
                "d_null": None if de is None else c.category.is_null(de),
                "d": None if de is None else encode_map(c.category, de),
            })
        out.append({"r": page.r, "entries": entries,
                    "truncated": [{"pos": list(e), "reason": why} for e, why in page.truncated]})
    return out
