"""Command line front end: one operation per invocation, JSON in, JSON (and DOT) out.

Exit status: 0 success, 2 schema violation, 3 axiom or exactness audit failure,
4 any other operation error.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from pathlib import Path

from .core import Bounds, CategoryError, check_ex0, check_ex1, check_ex2, check_ex3, check_nsb_duality, is_exact_at
from .core import is_exact_morphism, normal_factorise
from .couples import (
    Couple,
    CoupleError,
    bigraded_pages,
    check_exact_couple,
    complex_couple,
    derive_couple,
    random_abelian_couple,
    random_filtered_complex,
    random_group_tower,
    tower_couple,
)
from .dot import emit_dot
from .finite import is_modular_lattice, small_groups
from .io import (
    SCHEMA,
    SchemaError,
    require,
    decode_complex,
    decode_couple,
    decode_morphism,
    decode_object,
    decode_tower,
    dumps,
    encode_complex,
    encode_couple,
    encode_label,
    encode_map,
    encode_morphism,
    encode_pages,
    encode_report,
    encode_tower,
    instance,
    load,
)
from .nsb import nsb_lattice, psp_classes, psp_quotient

OPS = ("factorise", "check-exact", "nsb", "psp", "derive-couple", "spectral", "check-axioms", "tower")


class AuditFailure(Exception):
    def __init__(self, report: dict):
        super().__init__(report.get("summary", "audit failed"))
        self.report = report


def seed() -> int:
    return int(os.environ.get("HOMOLOG_SEED", "0"))


def _bounds(text: str | None) -> Bounds:
    if not text:
        return Bounds()
    try:
        s, g = (int(x) for x in text.split(","))
    except ValueError:
        raise SchemaError("--bounds takes SET_SIZE,GROUP_ORDER, e.g. 4,6") from None
    return Bounds(s, g)


def _window(text: str | None):
    if not text:
        return None
    try:
        ns, ps = text.split(",")
        n0, n1 = (int(x) for x in ns.split(":"))
        p0, p1 = (int(x) for x in ps.split(":"))
    except ValueError:
        raise SchemaError("--window takes N0:N1,P0:P1, e.g. 0:2,-3:0") from None
    return [(n, p) for n in range(n0, n1 + 1) for p in range(p0, p1 + 1)]


def _document(args) -> dict:
    if args.input is None:
        raise SchemaError("--input is required for this operation")
    if args.input.startswith("random:"):
        return _random_document(args.input.split(":", 1)[1])
    return load(args.input)


def _random_document(kind: str) -> dict:
    rng = random.Random(seed())
    if kind == "filtered":
        return encode_complex(random_filtered_complex(rng))
    if kind == "tower":
        return encode_tower(random_group_tower(rng, small_groups(8), rng.randint(1, 3)))
    if kind == "abelian":
        return encode_couple(random_abelian_couple(rng))
    raise SchemaError(f"unknown random input {kind!r}; use filtered, tower or abelian")


def _category(args, doc: dict):
    name = args.instance or doc.get("instance")
    if name is None:
        raise SchemaError("no instance given (use --instance or an \"instance\" field)")
    return instance(name)


def _couple(args, doc: dict) -> Couple:
    kind = doc.get("kind", "couple")
    if kind == "filtered_complex":
        return complex_couple(decode_complex(doc))
    if kind == "tower":
        which = (args.instance or "Nac").lower()
        return tower_couple(decode_tower(doc), "ngp" if which == "ngp" else "nac", audit=False)
    if kind == "couple":
        return decode_couple(doc)
    raise SchemaError(f"expected a couple, filtered_complex or tower document, got kind {kind!r}")


def _couple_report(c: Couple, window) -> dict:
    rep = check_exact_couple(c, window)
    return {"ok": rep.ok, "failures": dict(sorted(rep.failures.items())), "checked": rep.checked,
            "summary": rep.summary()}


# ---------------------------------------------------------------- operations


def op_factorise(args) -> dict:
    doc = _document(args)
    C = _category(args, doc)
    f = decode_morphism(C, doc.get("morphism", doc))
    fact = normal_factorise(C, f, audit=args.audit)
    return {
        "kind": "factorisation",
        "instance": C.name,
        "morphism": encode_morphism(C, f),
        "ker": encode_label(fact.ker_label),
        "nim": encode_label(fact.nim_label),
        "exact": is_exact_morphism(C, f),
        "maps": {name: encode_morphism(C, getattr(fact, name)) for name in ("ker", "ncm", "g", "nim", "cok")},
    }


def op_check_exact(args) -> dict:
    doc = _document(args)
    C = _category(args, doc)
    out = {"kind": "exactness", "instance": C.name}
    if "f" in doc and "g" in doc:
        f, g = decode_morphism(C, doc["f"]), decode_morphism(C, doc["g"])
        if C.cod(f) != C.dom(g):
            raise SchemaError("f and g are not composable")
        out.update(exact_at=is_exact_at(C, f, g), nim_f=encode_label(C.normal_image(f)), ker_g=encode_label(C.kernel(g)),
                   f_exact=is_exact_morphism(C, f), g_exact=is_exact_morphism(C, g))
    else:
        f = decode_morphism(C, doc.get("morphism", doc))
        out.update(exact=is_exact_morphism(C, f), ker=encode_label(C.kernel(f)), nim=encode_label(C.normal_image(f)))
    return out


def op_nsb(args) -> dict:
    doc = _document(args)
    C = _category(args, doc)
    a = decode_object(C, doc.get("object", doc))
    lat = nsb_lattice(C, a)
    labels = [encode_label(lat.label(i)) for i in lat.elements]
    return {"kind": "lattice", "instance": C.name, "labels": labels, "covers": [list(e) for e in lat.covers()],
            "modular": is_modular_lattice(lat), "size": lat.size}


def op_psp(args) -> dict:
    doc = _document(args)
    C = _category(args, doc)
    a, b = decode_object(C, require(doc, "dom")), decode_object(C, require(doc, "cod"))
    try:
        psp_quotient(C, [a, b])
    except CategoryError as exc:
        raise AuditFailure({"kind": "psp", "instance": C.name, "summary": str(exc)}) from exc
    classes = psp_classes(C, a, b)
    return {"kind": "psp", "instance": C.name, "maps": sum(len(c) for c in classes), "classes": len(classes),
            "representatives": [encode_map(C, c[0]) for c in classes]}


def op_derive(args) -> dict:
    doc = _document(args)
    c = _couple(args, doc)
    window = _window(args.window)
    rep = _couple_report(c, window)
    if not rep["ok"]:
        raise AuditFailure({"kind": "derive", "report": rep, "summary": rep["summary"]})
    d = derive_couple(c, audit=False)
    drep = _couple_report(d, window)
    out = {"kind": "derive", "report": rep, "derived_report": drep, "derived": encode_couple(d, window)}
    if not drep["ok"]:
        raise AuditFailure({**out, "summary": drep["summary"]})
    return out


def op_spectral(args) -> dict:
    doc = _document(args)
    c = _couple(args, doc)
    window = _window(args.window)
    rep = _couple_report(c, window)
    if not rep["ok"]:
        raise AuditFailure({"kind": "spectral", "report": rep, "summary": rep["summary"]})
    pages = bigraded_pages(c, args.rmax, window, audit=args.audit)
    return {"kind": "spectral", "report": rep, "r_max": args.rmax, "pages": encode_pages(c, pages)}


def op_tower(args) -> dict:
    doc = _document(args)
    if doc.get("kind") != "tower":
        raise SchemaError("expected a tower document")
    which = (args.instance or "Nac").lower()
    if which not in ("nac", "ngp"):
        raise SchemaError("tower couples live in Nac or Ngp")
    c = tower_couple(decode_tower(doc), which, audit=False)
    window = _window(args.window)
    rep = _couple_report(c, window)
    out = {"kind": "tower", "category": c.category.name, "quasi": c.quasi, "report": rep}
    if not rep["ok"]:
        raise AuditFailure({**out, "summary": rep["summary"]})
    pages = bigraded_pages(c, args.rmax, window, audit=args.audit)
    out["pages"] = encode_pages(c, pages)
    return out


def op_check_axioms(args) -> dict:
    if not args.instance:
        raise SchemaError("--instance is required for check-axioms")
    C = instance(args.instance)
    b = _bounds(args.bounds)
    objects = list(C.objects(b))
    checks = [check_ex2, check_ex3, check_nsb_duality]
    if args.audit:
        checks = [check_ex0, check_ex1] + checks
    results = [encode_report(chk(C, objects)) for chk in checks]
    out = {"kind": "axioms", "instance": C.name, "bounds": list(b.as_tuple()), "objects": len(objects),
           "results": results, "ok": all(r["status"] == "pass" for r in results)}
    if not out["ok"]:
        raise AuditFailure({**out, "summary": "; ".join(f"{r['axiom']}: {r['counterexample']}" for r in results
                                                          if r["status"] != "pass")})
    return out


HANDLERS = {
    "factorise": op_factorise,
    "check-exact": op_check_exact,
    "nsb": op_nsb,
    "psp": op_psp,
    "derive-couple": op_derive,
    "spectral": op_spectral,
    "check-axioms": op_check_axioms,
    "tower": op_tower,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="homolog", description="Normal factorisations, Nsb lattices, exact couples and spectral pages.")
    p.add_argument("operation", nargs="?", choices=OPS)
    p.add_argument("--op", choices=OPS, help="the operation (alternative to the positional form)")
    p.add_argument("--instance", help="Set2, Set*, Gp, Gp2, Q, Ngp, Ltc, Act, Act', Nac")
    p.add_argument("--input", help="a homolog/1 JSON file, or random:filtered|tower|abelian (seeded by HOMOLOG_SEED)")
    p.add_argument("--bounds", help="SET_SIZE,GROUP_ORDER for check-axioms")
    p.add_argument("--rmax", type=int, default=3, help="last spectral page")
    p.add_argument("--window", help="N0:N1,P0:P1 positions for couple audits and pages")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--audit", dest="audit", action="store_true", default=True, help="run the full audits (default)")
    mode.add_argument("--fast", dest="audit", action="store_false", help="skip morphism-level and page audits")
    p.add_argument("--out-dir", help="write <operation>.json (and .dot) here")
    return p


def _write(args, op: str, report: dict) -> None:
    doc = {"schema": SCHEMA, "operation": op, **report}
    text = dumps(doc)
    sys.stdout.write(text)
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{op}.json").write_text(text)
        try:
            dot = emit_dot(report)
        except (ValueError, KeyError):
            dot = None
        if dot is not None:
            (out / f"{op}.dot").write_text(dot)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    op = args.operation or args.op
    if op is None or (args.operation and args.op and args.operation != args.op):
        parser.print_usage(sys.stderr)
        sys.stderr.write("homolog: give exactly one operation\n")
        return 2
    try:
        report = HANDLERS[op](args)
    except SchemaError as exc:
        sys.stderr.write(f"homolog: schema violation: {exc}\n")
        return 2
    except AuditFailure as exc:
        _write(args, op, {"status": "audit-failure", **exc.report})
        sys.stderr.write(f"homolog: audit failure: {exc}\n")
        return 3
    except (CategoryError, CoupleError, ValueError) as exc:
        sys.stderr.write(f"homolog: {op} failed: {exc}\n")
        return 4
    except (KeyError, TypeError, IndexError) as exc:
        # malformed payloads that slipped past the decoders
        sys.stderr.write(f"homolog: {op} failed on the input: {exc!r}\n")
        return 4
    _write(args, op, {"status": "ok", **report})
    return 0


if __name__ == "__main__":
    sys.exit(main())
