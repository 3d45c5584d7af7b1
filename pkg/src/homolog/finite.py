"""Finite carriers: frozen maps, groups as Cayley tables, subgroups, lattices.

Groups are written additively and element 0 is always the identity.

>>> z4 = cyclic(4)
>>> span(z4, [2]).members
(0, 2)
>>> q, proj = quotient_group(z4, span(z4, [2]))
>>> q.size, proj
(2, (0, 1, 0, 1))
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Sequence


class FrozenMap(Mapping):
    """Immutable, hashable finite map with a canonical (sorted) item order."""

    __slots__ = ("_d", "_items", "_hash")

    def __init__(self, data: Mapping | Iterable[tuple] = ()):
        d = dict(data)
        self._d = d
        self._items = tuple(sorted(d.items()))
        self._hash = hash(self._items)

    def __getitem__(self, key):
        return self._d[key]

    def __call__(self, key):
        return self._d[key]

    def __iter__(self):
        return (k for k, _ in self._items)

    def __len__(self):
        return len(self._items)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if isinstance(other, FrozenMap):
            return self._hash == other._hash and self._items == other._items
        return NotImplemented

    def __repr__(self):
        return f"FrozenMap({dict(self._items)!r})"

    def items_sorted(self) -> tuple:
        return self._items

    def image(self, xs: Iterable) -> frozenset:
        return frozenset(self._d[x] for x in xs)

    def preimage(self, ys: Iterable) -> frozenset:
        ys = set(ys)
        return frozenset(k for k, v in self._items if v in ys)

    def compose_after(self, inner: "FrozenMap") -> "FrozenMap":
        """Return self ∘ inner."""
        return FrozenMap((k, self._d[v]) for k, v in inner._items)

    def restrict(self, keys: Iterable) -> "FrozenMap":
        return FrozenMap((k, self._d[k]) for k in keys)


def identity_map(xs: Iterable) -> FrozenMap:
    return FrozenMap((x, x) for x in xs)


# ---------------------------------------------------------------- groups


class GroupError(ValueError):
    pass


class FinGroup:
    """A finite group given by its addition table; 0 is the identity."""

    __slots__ = ("table", "size", "name", "_neg", "_hash", "_abelian")

    def __init__(self, table: Sequence[Sequence[int]], name: str = "", check: bool = True):
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        self.size = len(self.table)
        self.name = name
        if check:
            problem = group_violation(self.table)
            if problem:
                raise GroupError(problem)
        self._neg = tuple(row.index(0) for row in self.table)
        self._hash = hash(self.table)
        self._abelian = None

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FinGroup):
            return NotImplemented
        return self._hash == other._hash and self.table == other.table

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"FinGroup({self.name or self.size})"

    @property
    def elements(self) -> range:
        return range(self.size)

    def add(self, a: int, b: int) -> int:
        return self.table[a][b]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        """a - b, i.e. a + (-b)."""
        return self.table[a][self._neg[b]]

    def conj(self, s: int, x: int) -> int:
        """s + x - s."""
        return self.table[self.table[s][x]][self._neg[s]]

    def is_abelian(self) -> bool:
        if self._abelian is None:
            t = self.table
            self._abelian = all(t[a][b] == t[b][a] for a in self.elements for b in range(a))
        return self._abelian

    def is_subgroup(self, members: Iterable[int]) -> bool:
        m = set(members)
        if 0 not in m:
            return False
        return all(self.sub(a, b) in m for a in m for b in m)

    def is_normal(self, members: Iterable[int]) -> bool:
        m = set(members)
        return all(self.conj(s, x) in m for s in self.elements for x in m)

    def restrict(self, members: Iterable[int]) -> tuple["FinGroup", tuple[int, ...]]:
        """Reindex a subgroup as a group of its own; returns (group, embedding)."""
        ms = tuple(sorted(set(members)))
        if not ms or ms[0] != 0 or not self.is_subgroup(ms):
            raise GroupError("not a subgroup")
        pos = {x: i for i, x in enumerate(ms)}
        table = [[pos[self.table[a][b]] for b in ms] for a in ms]
        return FinGroup(table, check=False), ms


def group_violation(table: Sequence[Sequence[int]]) -> str | None:
    n = len(table)
    if n == 0:
        return "empty group"
    for row in table:
        if len(row) != n or any(not 0 <= x < n for x in row):
            return "table is not square over 0..n-1"
    for a in range(n):
        if table[0][a] != a or table[a][0] != a:
            return f"0 is not an identity at {a}"
        if 0 not in table[a]:
            return f"{a} has no inverse"
        b = list(table[a]).index(0)
        if table[b][a] != 0:
            return f"{a} has no two-sided inverse"
    for a in range(n):
        ra = table[a]
        for b in range(n):
            rab = table[ra[b]]
            rb = table[b]
            for c in range(n):
                if rab[c] != ra[rb[c]]:
                    return f"associativity fails at ({a},{b},{c})"
    return None


def group_from_op(n: int, op: Callable[[int, int], int], name: str = "") -> FinGroup:
    return FinGroup([[op(a, b) for b in range(n)] for a in range(n)], name)


def cyclic(n: int) -> FinGroup:
    return group_from_op(n, lambda a, b: (a + b) % n, f"Z{n}")


def trivial_group() -> FinGroup:
    return FinGroup([[0]], "0", check=False)


def elementary_abelian(k: int) -> FinGroup:
    """(Z/2)^k with elements as bit masks; addition is xor."""
    return FinGroup([[a ^ b for b in range(1 << k)] for a in range(1 << k)], f"F2^{k}", check=False)


def direct_product(g: FinGroup, h: FinGroup) -> FinGroup:
    """Elements (a, b) are encoded as a * |h| + b."""
    m = h.size

    def op(x, y):
        return g.add(x // m, y // m) * m + h.add(x % m, y % m)

    return group_from_op(g.size * m, op, f"{g.name}x{h.name}")


def _perm_group(perms: list[tuple[int, ...]], name: str) -> FinGroup:
    idx = {p: i for i, p in enumerate(perms)}

    def op(a, b):
        # right actions compose left to right: x + (a + b) = (x + a) + b
        pa, pb = perms[a], perms[b]
        return idx[tuple(pb[pa[i]] for i in range(len(pa)))]

    return group_from_op(len(perms), op, name)


def symmetric_group(n: int) -> FinGroup:
    perms = sorted(itertools.permutations(range(n)))
    return _perm_group(perms, f"S{n}")


def dihedral(n: int) -> FinGroup:
    """Dihedral group of order 2n; rotations r^k are 0..n-1, reflections n..2n-1."""

    def op(a, b):
        ka, fa = a % n, a // n
        kb, fb = b % n, b // n
        k = (ka + (-kb if fa else kb)) % n
        return ((fa ^ fb) * n) + k

    return group_from_op(2 * n, op, f"D{n}")


def quaternion() -> FinGroup:
    # unit quaternions ±1, ±i, ±j, ±k; encode sign*basis
    basis_mul = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }
    elems = [(s, b) for b in range(4) for s in (1, -1)]
    idx = {e: i for i, e in enumerate(elems)}

    def op(a, b):
        (sa, ba), (sb, bb) = elems[a], elems[b]
        s, c = basis_mul[(ba, bb)]
        return idx[(sa * sb * s, c)]

    return group_from_op(8, op, "Q8")


def small_groups(max_order: int) -> list[FinGroup]:
    """One representative per isomorphism type, for orders up to 8."""
    if max_order > 8:
        raise ValueError("catalogue only covers orders up to 8")
    out: list[FinGroup] = []
    for n in range(1, max_order + 1):
        if n == 1:
            out.append(trivial_group())
        elif n in (2, 3, 5, 7):
            out.append(cyclic(n))
        elif n == 4:
            out += [cyclic(4), elementary_abelian(2)]
        elif n == 6:
            out += [cyclic(6), symmetric_group(3)]
        elif n == 8:
            out += [
                cyclic(8),
                direct_product(cyclic(4), cyclic(2)),
                elementary_abelian(3),
                dihedral(4),
                quaternion(),
            ]
    return out


@dataclass(frozen=True)
class Subgroup:
    parent: FinGroup = field(repr=False)
    members: tuple[int, ...]

    @property
    def set(self) -> frozenset[int]:
        return frozenset(self.members)

    @property
    def size(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return x in self.set


def closure(g: FinGroup, xs: Iterable[int]) -> frozenset[int]:
    """Subgroup spanned by xs, as a frozenset (closure under addition)."""
    gens = sorted(set(xs) - {0})
    for x in gens:
        if not 0 <= x < g.size:
            raise IndexError(f"element {x} out of range")
    seen = {0}
    stack = [0]
    t = g.table
    while stack:
        a = stack.pop()
        row = t[a]
        for x in gens:
            b = row[x]
            if b not in seen:
                seen.add(b)
                stack.append(b)
    return frozenset(seen)


def span(g: FinGroup, xs: Iterable[int]) -> Subgroup:
    return Subgroup(g, tuple(sorted(closure(g, xs))))


def invariant_closure(g: FinGroup, h: Subgroup | Iterable[int]) -> Subgroup:
    members = h.members if isinstance(h, Subgroup) else tuple(h)
    if not g.is_subgroup(members):
        raise GroupError("not a subgroup")
    return Subgroup(g, tuple(sorted(normal_closure(g, members))))


def normal_closure(g: FinGroup, xs: Iterable[int]) -> frozenset[int]:
    current = closure(g, xs)
    while True:
        conj = {g.conj(s, x) for s in g.elements for x in current}
        if conj <= current:
            return current
        current = closure(g, current | conj)


def cosets(g: FinGroup, n: Iterable[int]) -> list[frozenset[int]]:
    """Right cosets n + s, ordered by least member."""
    ns = sorted(set(n))
    seen: set[int] = set()
    out = []
    for s in g.elements:
        if s in seen:
            continue
        c = frozenset(g.add(x, s) for x in ns)
        seen |= c
        out.append(c)
    return out


def quotient_group(g: FinGroup, n: Subgroup | Iterable[int]) -> tuple[FinGroup, tuple[int, ...]]:
    """Quotient by a normal subgroup; cosets are numbered by least representative."""
    members = n.members if isinstance(n, Subgroup) else tuple(sorted(set(n)))
    if not g.is_subgroup(members):
        raise GroupError("not a subgroup")
    if not g.is_normal(members):
        raise GroupError("subgroup is not normal")
    cs = cosets(g, members)
    proj = [0] * g.size
    reps = []
    for i, c in enumerate(cs):
        reps.append(min(c))
        for x in c:
            proj[x] = i
    table = [[proj[g.add(a, b)] for b in reps] for a in reps]
    return FinGroup(table, check=False), tuple(proj)


def subgroups(g: FinGroup) -> list[frozenset[int]]:
    """All subgroups, sorted by (size, members)."""
    found = {frozenset({0})}
    cyc = {closure(g, [x]) for x in g.elements}
    found |= cyc
    frontier = set(found)
    while frontier:
        new = set()
        for h in frontier:
            for c in cyc:
                if not c <= h:
                    j = closure(g, h | c)
                    if j not in found:
                        new.add(j)
        found |= new
        frontier = new
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def is_homomorphism(g: FinGroup, h: FinGroup, f: Sequence[int] | Mapping[int, int], domain: Iterable[int] | None = None) -> bool:
    dom = list(g.elements if domain is None else domain)
    return all(f[g.add(a, b)] == h.add(f[a], f[b]) for a in dom for b in dom)


def homomorphisms(g: FinGroup, h: FinGroup, domain: Iterable[int] | None = None,
                  codomain: Iterable[int] | None = None) -> Iterator[FrozenMap]:
    """All homomorphisms from the subgroup `domain` of g into the subgroup `codomain` of h.

    Backtracks on a generating set, then checks the extension.
    """
    dom = sorted(g.elements if domain is None else domain)
    cod = sorted(h.elements if codomain is None else codomain)
    gens: list[int] = []
    span_so_far = frozenset({0})
    for x in dom:
        if x not in span_so_far:
            gens.append(x)
            span_so_far = closure(g, span_so_far | {x})
    for images in itertools.product(cod, repeat=len(gens)):
        f = {0: 0}
        frontier = [0]
        ok = True
        while frontier and ok:
            a = frontier.pop()
            for x, y in zip(gens, images):
                b = g.add(a, x)
                fb = h.add(f[a], y)
                if b in f:
                    if f[b] != fb:
                        ok = False
                        break
                else:
                    f[b] = fb
                    frontier.append(b)
        if ok and len(f) == len(dom) and all(f[g.add(a, b)] == h.add(f[a], f[b]) for a in dom for b in dom):
            yield FrozenMap(f)


# ---------------------------------------------------------------- lattices


class LatticeError(ValueError):
    pass


@dataclass(frozen=True)
class FinLattice:
    """A finite lattice: order relation plus meet/join tables (element indices)."""

    leq: tuple[tuple[bool, ...], ...]
    meet: tuple[tuple[int, ...], ...]
    join: tuple[tuple[int, ...], ...]
    labels: tuple | None = field(default=None, compare=False)

    @property
    def size(self) -> int:
        return len(self.leq)

    @property
    def elements(self) -> range:
        return range(self.size)

    @property
    def bottom(self) -> int:
        return next(x for x in self.elements if all(self.leq[x]))

    @property
    def top(self) -> int:
        return next(x for x in self.elements if all(self.leq[y][x] for y in self.elements))

    def le(self, a: int, b: int) -> bool:
        return self.leq[a][b]

    def down(self, a: int) -> list[int]:
        return [x for x in self.elements if self.leq[x][a]]

    def up(self, a: int) -> list[int]:
        return [x for x in self.elements if self.leq[a][x]]

    def label(self, x: int):
        return self.labels[x] if self.labels is not None else x

    def index(self, label) -> int:
        if self.labels is None:
            return label
        return self.labels.index(label)

    def covers(self) -> list[tuple[int, int]]:
        """Hasse diagram edges (a, b) with a < b and nothing in between."""
        out = []
        for a in self.elements:
            for b in self.elements:
                if a != b and self.leq[a][b]:
                    if not any(c not in (a, b) and self.leq[a][c] and self.leq[c][b] for c in self.elements):
                        out.append((a, b))
        return out

    def restrict(self, members: Sequence[int]) -> tuple["FinLattice", tuple[int, ...]]:
        """Sublattice on `members` (an interval, say), reindexed in increasing order."""
        ms = tuple(sorted(members))
        sub = lattice_from_leq([[self.leq[a][b] for b in ms] for a in ms],
                               labels=None if self.labels is None else tuple(self.labels[m] for m in ms))
        return sub, ms


def lattice_from_leq(leq: Sequence[Sequence[bool]], labels: Sequence | None = None) -> FinLattice:
    n = len(leq)
    le = tuple(tuple(bool(x) for x in row) for row in leq)
    problem = _order_violation(le)
    if problem:
        raise LatticeError(problem)

    def bound(a, b, upper):
        cands = [c for c in range(n) if (le[a][c] and le[b][c] if upper else le[c][a] and le[c][b])]
        best = [c for c in cands if all((le[c][d] if upper else le[d][c]) for d in cands)]
        if not best:
            raise LatticeError(f"no {'join' if upper else 'meet'} for ({a},{b})")
        return best[0]

    meet = tuple(tuple(bound(a, b, False) for b in range(n)) for a in range(n))
    join = tuple(tuple(bound(a, b, True) for b in range(n)) for a in range(n))
    if n == 0:
        raise LatticeError("empty lattice")
    return FinLattice(le, meet, join, None if labels is None else tuple(labels))


def lattice_from_order(items: Sequence, le: Callable[[object, object], bool]) -> FinLattice:
    """Labelled lattice from a list of items and an order predicate."""
    return lattice_from_leq([[le(a, b) for b in items] for a in items], labels=items)


def _order_violation(le) -> str | None:
    n = len(le)
    for a in range(n):
        if len(le[a]) != n:
            return "order relation is not square"
        if not le[a][a]:
            return f"not reflexive at {a}"
    for a in range(n):
        for b in range(n):
            if a != b and le[a][b] and le[b][a]:
                return f"not antisymmetric at ({a},{b})"
            if le[a][b]:
                for c in range(n):
                    if le[b][c] and not le[a][c]:
                        return f"not transitive at ({a},{b},{c})"
    return None


@dataclass(frozen=True)
class LatticeReport:
    valid: bool
    violation: str | None = None


def check_lattice(l: FinLattice) -> LatticeReport:
    n = l.size
    if n == 0:
        return LatticeReport(False, "empty lattice")
    problem = _order_violation(l.leq)
    if problem:
        return LatticeReport(False, problem)
    le = l.leq
    for a in range(n):
        for b in range(n):
            m, j = l.meet[a][b], l.join[a][b]
            if not (le[m][a] and le[m][b]):
                return LatticeReport(False, f"meet({a},{b}) is not a lower bound")
            if not (le[a][j] and le[b][j]):
                return LatticeReport(False, f"join({a},{b}) is not an upper bound")
            for c in range(n):
                if le[c][a] and le[c][b] and not le[c][m]:
                    return LatticeReport(False, f"meet({a},{b}) is not greatest")
                if le[a][c] and le[b][c] and not le[j][c]:
                    return LatticeReport(False, f"join({a},{b}) is not least")
    if not any(all(le[x]) for x in range(n)):
        return LatticeReport(False, "no bottom")
    return LatticeReport(True)


def is_modular_lattice(l: FinLattice) -> bool:
    m, j, le = l.meet, l.join, l.leq
    r = l.elements
    return all(
        j[x][m[y][z]] == m[j[x][y]][z]
        for x in r for z in r if le[x][z] for y in r
    )


def chain(n: int) -> FinLattice:
    return lattice_from_leq([[a <= b for b in range(n)] for a in range(n)])


def boolean_lattice(k: int) -> FinLattice:
    return lattice_from_leq([[a & b == a for b in range(1 << k)] for a in range(1 << k)])


def pentagon() -> FinLattice:
    # 0 < a < b < 1, 0 < c < 1, c incomparable to a, b
    rel = {(0, x) for x in range(5)} | {(x, 4) for x in range(5)} | {(x, x) for x in range(5)} | {(1, 2)}
    return lattice_from_leq([[(a, b) in rel for b in range(5)] for a in range(5)])


def diamond() -> FinLattice:
    rel = {(0, x) for x in range(5)} | {(x, 4) for x in range(5)} | {(x, x) for x in range(5)}
    return lattice_from_leq([[(a, b) in rel for b in range(5)] for a in range(5)])


def product_lattice(x: FinLattice, y: FinLattice) -> FinLattice:
    """Cartesian product; pair (a, b) has index a * |y| + b (lexicographic)."""
    m = y.size
    n = x.size * m
    return lattice_from_leq([[x.leq[a // m][b // m] and y.leq[a % m][b % m] for b in range(n)] for a in range(n)])


def subgroup_lattice(g: FinGroup) -> FinLattice:
    return lattice_from_order(subgroups(g), lambda a, b: a <= b)
