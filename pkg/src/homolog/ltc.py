"""Finite lattices and Galois connections (the category Ltc).

A connection f: X -> Y is a pair (lower, upper) with lower ⊣ upper.  Both
maps are stored as tuples of element indices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from .core import Bounds, Category, CategoryError, NormalFactorisation, normal_factorise
from .finite import (
    FinLattice,
    LatticeError,
    boolean_lattice,
    chain,
    diamond,
    is_modular_lattice,
    pentagon,
    product_lattice,
)


class ConnectionError_(CategoryError):
    pass


@dataclass(frozen=True)
class Connection:
    dom: FinLattice
    cod: FinLattice
    lower: tuple[int, ...]
    upper: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "lower", tuple(self.lower))
        object.__setattr__(self, "upper", tuple(self.upper))


def connection_violation(f: Connection) -> str | None:
    X, Y = f.dom, f.cod
    if len(f.lower) != X.size or len(f.upper) != Y.size:
        raise ConnectionError_("map tables do not match the lattice sizes")
    for a in X.elements:
        for b in X.elements:
            if X.leq[a][b] and not Y.leq[f.lower[a]][f.lower[b]]:
                return f"lower map not increasing at ({a},{b})"
    for a in Y.elements:
        for b in Y.elements:
            if Y.leq[a][b] and not X.leq[f.upper[a]][f.upper[b]]:
                return f"upper map not increasing at ({a},{b})"
    for x in X.elements:
        if not X.leq[x][f.upper[f.lower[x]]]:
            return f"upper∘lower is not inflationary at {x}"
    for y in Y.elements:
        if not Y.leq[f.lower[f.upper[y]]][y]:
            return f"lower∘upper is not deflationary at {y}"
    return None


def connection(dom: FinLattice, cod: FinLattice, lower, upper) -> Connection:
    f = Connection(dom, cod, lower, upper)
    problem = connection_violation(f)
    if problem:
        raise ConnectionError_(problem)
    return f


def from_lower(dom: FinLattice, cod: FinLattice, lower) -> Connection:
    """Build a connection from its lower adjoint: upper(y) = max{x | lower(x) <= y}."""
    upper = []
    for y in cod.elements:
        cands = [x for x in dom.elements if cod.leq[lower[x]][y]]
        best = [x for x in cands if all(dom.leq[c][x] for c in cands)]
        if not best:
            raise ConnectionError_("lower map has no upper adjoint")
        upper.append(best[0])
    return connection(dom, cod, lower, upper)


def compose(g: Connection, f: Connection) -> Connection:
    if f.cod != g.dom:
        raise ConnectionError_("connections are not composable")
    return Connection(
        f.dom,
        g.cod,
        tuple(g.lower[f.lower[x]] for x in f.dom.elements),
        tuple(f.upper[g.upper[y]] for y in g.cod.elements),
    )


def identity(x: FinLattice) -> Connection:
    return Connection(x, x, tuple(x.elements), tuple(x.elements))


def zero(x: FinLattice, y: FinLattice) -> Connection:
    return Connection(x, y, (y.bottom,) * x.size, (x.top,) * y.size)


def opposite(x: FinLattice) -> FinLattice:
    n = x.size
    return FinLattice(
        tuple(tuple(x.leq[b][a] for b in range(n)) for a in range(n)),
        x.join,
        x.meet,
        x.labels,
    )


def reverse(f: Connection) -> Connection:
    """Selfduality: Y^op -> X^op with lower and upper exchanged."""
    return Connection(opposite(f.cod), opposite(f.dom), f.upper, f.lower)


def connection_leq(f: Connection, g: Connection) -> bool:
    """f <= g iff f.lower <= g.lower pointwise."""
    return all(f.cod.leq[a][b] for a, b in zip(f.lower, g.lower))


def connection_sum(f: Connection, g: Connection) -> Connection:
    if f.dom != g.dom or f.cod != g.cod:
        raise ConnectionError_("sum needs parallel connections")
    X, Y = f.dom, f.cod
    return Connection(
        X, Y,
        tuple(Y.join[a][b] for a, b in zip(f.lower, g.lower)),
        tuple(X.meet[a][b] for a, b in zip(f.upper, g.upper)),
    )


def _down(x: FinLattice, a: int):
    sub, ms = x.restrict(x.down(a))
    return sub, ms, {v: i for i, v in enumerate(ms)}


def _up(x: FinLattice, a: int):
    sub, ms = x.restrict(x.up(a))
    return sub, ms, {v: i for i, v in enumerate(ms)}


def element_sequence(x: FinLattice, a: int) -> tuple[Connection, Connection]:
    """The short exact sequence ↓a -> X -> ↑a determined by an element a."""
    return LTC.subobject(x, a), LTC.quotient(x, a)


class Ltc(Category):
    name = "Ltc"

    def compose(self, g, f):
        return compose(g, f)

    def identity(self, a):
        return identity(a)

    def is_null(self, f):
        b = f.cod.bottom
        return all(v == b for v in f.lower)

    def is_iso(self, f):
        return sorted(f.lower) == list(f.cod.elements) and all(f.upper[f.lower[x]] == x for x in f.dom.elements)

    def inverse(self, f):
        if not self.is_iso(f):
            raise CategoryError("not an isomorphism")
        return Connection(f.cod, f.dom, f.upper, f.lower)

    def kernel(self, f):
        return f.upper[f.cod.bottom]

    def normal_image(self, f):
        return f.lower[f.dom.top]

    def subobject(self, a, x):
        sub, ms, pos = _down(a, x)
        return Connection(sub, a, ms, tuple(pos[a.meet[y][x]] for y in a.elements))

    def quotient(self, a, x):
        sub, ms, pos = _up(a, x)
        return Connection(a, sub, tuple(pos[a.join[y][x]] for y in a.elements), ms)

    def lift(self, m, h):
        pos = {v: i for i, v in enumerate(m.lower)}
        if not all(v in pos for v in h.lower):
            raise CategoryError("connection does not factor through the subobject")
        return Connection(h.dom, m.dom, tuple(pos[v] for v in h.lower), tuple(h.upper[v] for v in m.lower))

    def descend(self, p, h):
        ms = p.upper  # element j of the quotient is ms[j] in the ambient lattice
        pos = {v: i for i, v in enumerate(ms)}
        if not all(v in pos for v in h.upper):
            raise CategoryError("connection does not factor through the quotient")
        return Connection(p.cod, h.cod, tuple(h.lower[v] for v in ms), tuple(pos[v] for v in h.upper))

    def nsb(self, a):
        return list(a.elements)

    def sub_leq(self, a, x, y):
        return a.leq[x][y]

    def sub_meet(self, a, x, y):
        return a.meet[x][y]

    def sub_join(self, a, x, y):
        return a.join[x][y]

    def objects(self, bounds: Bounds):
        out = [chain(n) for n in range(1, bounds.set_size + 1)]
        if bounds.set_size >= 4:
            out += [boolean_lattice(2), pentagon(), diamond()]
        return out

    def homs(self, a, b):
        yield from connections(a, b)

    def zero_object(self):
        return chain(1)

    def to_zero(self, a):
        return zero(a, chain(1))

    def from_zero(self, b):
        return zero(chain(1), b)

    def describe(self, x):
        if isinstance(x, Connection):
            return f"L{x.dom.size}->L{x.cod.size}:lower={list(x.lower)},upper={list(x.upper)}"
        if isinstance(x, FinLattice):
            return f"L{x.size}"
        return repr(x)


LTC = Ltc()


def connections(x: FinLattice, y: FinLattice) -> Iterator[Connection]:
    """All connections x -> y: lower maps preserving 0 and binary joins."""
    rest = [a for a in x.elements if a != x.bottom]
    for vals in itertools.product(y.elements, repeat=len(rest)):
        low = [0] * x.size
        low[x.bottom] = y.bottom
        for a, v in zip(rest, vals):
            low[a] = v
        if all(low[x.join[a][b]] == y.join[low[a]][low[b]] for a in x.elements for b in x.elements):
            yield from_lower(x, y, low)


def ltc_factorise(f: Connection) -> NormalFactorisation:
    return normal_factorise(LTC, f)


def is_exact_connection(f: Connection) -> bool:
    X, Y = f.dom, f.cod
    k = f.upper[Y.bottom]
    n = f.lower[X.top]
    return all(f.upper[f.lower[x]] == X.join[x][k] for x in X.elements) and all(
        f.lower[f.upper[y]] == Y.meet[y][n] for y in Y.elements
    )


def is_modular_connection(f: Connection) -> bool:
    X, Y = f.dom, f.cod
    if not (is_modular_lattice(X) and is_modular_lattice(Y)):
        raise LatticeError("modularity of a connection needs modular lattices")
    return all(
        f.upper[Y.join[f.lower[x]][y]] == X.join[x][f.upper[y]]
        and f.lower[X.meet[f.upper[y]][x]] == Y.meet[y][f.lower[x]]
        for x in X.elements for y in Y.elements
    )


@dataclass(frozen=True)
class Biproduct:
    lattice: FinLattice
    i: Connection
    j: Connection
    p: Connection
    q: Connection


def biproduct(x: FinLattice, y: FinLattice) -> Biproduct:
    """X × Y with injections i, j and projections p, q; (a, b) has index a * |Y| + b."""
    xy = product_lattice(x, y)
    m = y.size

    def enc(a, b):
        return a * m + b

    pairs = [(e // m, e % m) for e in xy.elements]
    i = Connection(x, xy, tuple(enc(a, y.bottom) for a in x.elements), tuple(a for a, _ in pairs))
    p = Connection(xy, x, tuple(a for a, _ in pairs), tuple(enc(a, y.top) for a in x.elements))
    j = Connection(y, xy, tuple(enc(x.bottom, b) for b in y.elements), tuple(b for _, b in pairs))
    q = Connection(xy, y, tuple(b for _, b in pairs), tuple(enc(x.top, b) for b in y.elements))
    return Biproduct(xy, i, j, p, q)
