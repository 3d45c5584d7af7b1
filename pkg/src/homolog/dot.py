"""Graphviz DOT text for factorisations, Nsb lattices, subquotient squares and spectral pages."""

from __future__ import annotations

import json


def _q(s) -> str:
    text = s if isinstance(s, str) else json.dumps(s, sort_keys=True)
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _graph(name: str, nodes: list[tuple[str, str]], edges: list[tuple[str, str, str]], extra: list[str] = ()) -> str:
    lines = [f"digraph {_q(name)} {{", "  node [shape=plaintext];"]
    lines += [f"  {_q(n)} [label={_q(label)}];" for n, label in nodes]
    lines += [f"  {_q(a)} -> {_q(b)} [label={_q(label)}];" for a, b, label in edges]
    lines += [f"  {x}" for x in extra]
    lines.append("}")
    return "\n".join(lines) + "\n"


def _factorisation(rep: dict) -> str:
    k, n = rep["ker"], rep["nim"]
    nodes = [
        ("Ker", f"Ker {json.dumps(k)}"),
        ("A", "A"),
        ("B", "B"),
        ("Cok", f"B/{json.dumps(n)}"),
        ("Coim", f"A/{json.dumps(k)}"),
        ("Im", f"Nim {json.dumps(n)}"),
    ]
    edges = [
        ("Ker", "A", "ker f"),
        ("A", "B", "f"),
        ("B", "Cok", "cok f"),
        ("A", "Coim", "ncm f"),
        ("Coim", "Im", "g (iso)" if rep.get("exact") else "g"),
        ("Im", "B", "nim f"),
    ]
    return _graph("factorisation", nodes, edges, ["{rank=same; Ker; A; B; Cok}", "{rank=same; Coim; Im}"])


def _lattice(rep: dict) -> str:
    labels = rep["labels"]
    nodes = [(json.dumps(x), json.dumps(x)) for x in labels]
    edges = [(json.dumps(labels[a]), json.dumps(labels[b]), "") for a, b in rep["covers"]]
    return _graph("nsb", nodes, edges, ["rankdir=BT;"])


def _square(rep: dict) -> str:
    num, den = json.dumps(rep["num"]), json.dumps(rep["den"])
    nodes = [("M", f"M={num}"), ("A", "A"), ("S", f"{num}/{den}"), ("A/N", f"A/{den}")]
    edges = [("M", "A", "m"), ("M", "S", "h"), ("A", "A/N", "q"), ("S", "A/N", "k")]
    return _graph("subquotient", nodes, edges, ["{rank=same; M; A}", "{rank=same; S; \"A/N\"}"])


def _page(page: dict) -> str:
    r = page["r"]
    name = lambda pos: "E_" + "_".join(str(i) for i in pos)
    nodes, edges, extra = [], [], []
    rows: dict = {}
    present = {tuple(e["pos"]) for e in page["entries"]}
    for e in page["entries"]:
        pos = tuple(e["pos"])
        nodes.append((name(pos), f"E^{r}{list(pos)} |{e['order']}|"))
        if len(pos) == 2:
            rows.setdefault(pos[0], []).append(name(pos))
            extra.append(f"{_q(name(pos))} [pos={_q(f'{pos[1]},{pos[0]}!')}];")
    for e in page["entries"]:
        t = e.get("target")
        if t is not None and tuple(t) in present and not e.get("d_null"):
            edges.append((name(tuple(e["pos"])), name(tuple(t)), f"d{r}"))
    for n in sorted(rows):
        extra.append("{rank=same; " + "; ".join(_q(x) for x in rows[n]) + "}")
    return _graph(f"E{r}", nodes, edges, extra)


def emit_dot(report: dict) -> str:
    """DOT text for a report of kind factorisation, lattice, subquotient, page or spectral."""
    kind = report.get("kind")
    if kind == "factorisation":
        return _factorisation(report)
    if kind == "lattice":
        return _lattice(report)
    if kind == "subquotient":
        return _square(report)
    if kind == "page":
        return _page(report)
    if kind == "spectral":
        pages = report["pages"]
        want = report.get("dot_page", pages[-1]["r"] if pages else None)
        for p in pages:
            if p["r"] == want:
                return _page(p)
        raise ValueError("the report has no page to draw")
    raise ValueError(f"unsupported report kind {kind!r}")
