"""Group actions on pointed sets (Act), triples (Act′) and normalised actions (Nac).

An action keeps its points and operators as subsets of an ambient pointed set
and an ambient group, like the group pairs of :mod:`homolog.pairs`.  Normal
subobjects are labelled by their point sets: the operator subgroup is then
determined, S₁ = {s | X₁ + s ⊆ X₁}.

>>> a = swap_action()
>>> [sorted(x) for x in ACT.nsb(a)]
[[0], [0, 1, 2]]
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .core import (
    Bounds,
    Category,
    CategoryError,
    Functor,
    NormalFactorisation,
    is_exact_at,
    is_exact_morphism,
    normal_factorise,
)
from .finite import (
    FinGroup,
    FrozenMap,
    closure,
    cyclic,
    homomorphisms,
    identity_map,
    small_groups,
    trivial_group,
)
from .pairs import (
    GP,
    GP2,
    SETPT,
    Arrow,
    GroupPair,
    PointedSet,
    canon_sort,
    cosets_in,
    inverse_choices,
    is_quasi_hom,
    quasi_maps,
)


@dataclass(frozen=True)
class Action:
    """A right action of the subgroup `top` of `group` on the pointed set `points`.

    `sub` is None for plain actions and holds S₀ = Fix_S(0_X) for Act′ triples.
    """

    points: frozenset
    group: FinGroup = field(repr=False)
    top: frozenset
    act: FrozenMap = field(repr=False)
    sub: frozenset | None = None

    def __post_init__(self):
        object.__setattr__(self, "points", frozenset(self.points))
        object.__setattr__(self, "top", frozenset(self.top))
        if self.sub is not None:
            object.__setattr__(self, "sub", frozenset(self.sub))

    def plus(self, x: int, s: int) -> int:
        return self.act[(x, s)]

    def orbit(self, x: int) -> frozenset:
        return frozenset(self.act[(x, s)] for s in self.top)

    def fix(self, x: int = 0) -> frozenset:
        return frozenset(s for s in self.top if self.act[(x, s)] == x)

    def with_sub(self, sub: Iterable[int] | None) -> "Action":
        return Action(self.points, self.group, self.top, self.act, None if sub is None else frozenset(sub))

    def pair(self) -> GroupPair:
        return GroupPair(self.group, self.top, self.sub if self.sub is not None else self.fix())

    def __repr__(self):
        g = self.group.name or str(self.group.size)
        s = "" if self.sub is None else f",{sorted(self.sub)}"
        return f"({sorted(self.points)},{g}:{sorted(self.top)}{s})"


def action_violation(a: Action) -> str | None:
    g = a.group
    if 0 not in a.points:
        return "points must contain the base point 0"
    if not g.is_subgroup(a.top):
        return "operators do not form a subgroup"
    for x in a.points:
        if a.act.get((x, 0)) != x:
            return f"x + 0 != x at {x}"
        for s in a.top:
            if a.act.get((x, s)) not in a.points:
                return f"action leaves the point set at ({x},{s})"
    for x in a.points:
        for s in a.top:
            for t in a.top:
                if a.act[(a.act[(x, s)], t)] != a.act[(x, g.add(s, t))]:
                    return f"(x+s)+t != x+(s+t) at ({x},{s},{t})"
    if a.sub is not None:
        if a.sub != a.fix():
            return "S0 must be the stabiliser of the base point"
    return None


def action(points: Iterable[int], group: FinGroup, table, top: Iterable[int] | None = None,
           sub: Iterable[int] | None = None) -> Action:
    """Build and validate an action; `table` maps (x, s) to x + s, or is a row list table[x][s]."""
    pts = frozenset(points)
    top = frozenset(group.elements if top is None else top)
    if isinstance(table, (list, tuple)):
        act = FrozenMap(((x, s), table[x][s]) for x in sorted(pts) for s in sorted(top))
    else:
        act = FrozenMap(table)
    a = Action(pts, group, top, act, None if sub is None else frozenset(sub))
    problem = action_violation(a)
    if problem:
        raise CategoryError(problem)
    return a


def swap_action() -> Action:
    """({0, a, b}, Z2) with the generator swapping a and b."""
    return action(range(3), cyclic(2), [[0, 0], [1, 2], [2, 1]])


@dataclass(frozen=True)
class ActArrow:
    dom: Action
    cod: Action
    fp: FrozenMap
    fs: FrozenMap

    def __call__(self, x):
        return self.fp[x]


def arrow_violation(f: ActArrow, quasi: bool = False) -> str | None:
    a, b = f.dom, f.cod
    if set(f.fp) != a.points or not set(f.fp.values()) <= b.points:
        return "point map does not match the carriers"
    if set(f.fs) != a.top or not set(f.fs.values()) <= b.top:
        return "operator map does not match the groups"
    if f.fp[0] != 0:
        return "point map is not pointed"
    if quasi:
        if not is_quasi_hom(f.fs, a.pair(), b.pair()):
            return "operator map is not a quasi-homomorphism"
    elif any(f.fs[a.group.add(s, t)] != b.group.add(f.fs[s], f.fs[t]) for s in a.top for t in a.top):
        return "operator map is not a homomorphism"
    for x in a.points:
        for s in a.top:
            if f.fp[a.plus(x, s)] != b.plus(f.fp[x], f.fs[s]):
                return f"f(x+s) != fx + fs at ({x},{s})"
    return None


def act_map(dom: Action, cod: Action, fp, fs, quasi: bool = False) -> ActArrow:
    fp = FrozenMap(enumerate(fp)) if isinstance(fp, (list, tuple)) else FrozenMap(fp)
    fs = FrozenMap(enumerate(fs)) if isinstance(fs, (list, tuple)) else FrozenMap(fs)
    f = ActArrow(dom, cod, fp, fs)
    problem = arrow_violation(f, quasi=quasi or dom.sub is not None)
    if problem:
        raise CategoryError(problem)
    return f


# ---------------------------------------------------------------- subsets and congruences


def linking(a: Action, xs: Iterable[int]) -> frozenset:
    """Operators s with x + s = x' for some x, x' in xs."""
    xs = frozenset(xs)
    return frozenset(s for s in a.top if any(a.plus(x, s) in xs for x in xs))


def stabiliser(a: Action, xs: Iterable[int]) -> frozenset:
    xs = frozenset(xs)
    return frozenset(s for s in a.top if all(a.plus(x, s) in xs for x in xs))


def is_normal_subset(a: Action, xs: Iterable[int]) -> bool:
    """0 ∈ X₁, and any operator linking two points of X₁ maps X₁ into itself."""
    xs = frozenset(xs)
    if 0 not in xs or not xs <= a.points:
        return False
    return linking(a, xs) <= stabiliser(a, xs)


def normal_join_closure(a: Action, xs: Iterable[int]) -> frozenset:
    """The least normal subset containing xs."""
    cur = frozenset(xs) | {0}
    while True:
        grown = cur | frozenset(a.plus(x, s) for s in linking(a, cur) for x in cur)
        if grown == cur:
            return cur
        cur = grown


def is_normal_subaction(a: Action, xs: Iterable[int]) -> tuple[bool, frozenset]:
    """Normality of X₁ with its operator subgroup; three characterisations must agree."""
    xs = frozenset(xs)
    if 0 not in xs or not xs <= a.points:
        return False, frozenset()
    link = linking(a, xs)
    stab = stabiliser(a, xs)
    # S₁ a subgroup keeping X₁ stable, containing every linking operator
    span = closure(a.group, link)
    v1 = span <= stab
    # any linking operator keeps X₁ stable; S₁ is the stabiliser
    v2 = link <= stab
    # some subgroup S₁ with: x + s ∈ X₁ ⇔ s ∈ S₁, for every x ∈ X₁
    v3 = a.group.is_subgroup(stab) and all((a.plus(x, s) in xs) == (s in stab) for x in xs for s in a.top)
    if not (v1 == v2 == v3):
        raise AssertionError(f"normality characterisations disagree on {sorted(xs)}")
    if v2 and stab != link:
        raise AssertionError("stabiliser and linking set differ on a normal subset")
    return v2, stab if v2 else frozenset()


def congruence(a: Action, xs: Iterable[int]) -> FrozenMap:
    """Least S-congruence identifying the points of xs; each point maps to the least member of its class."""
    parent = {x: x for x in a.points}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            lo, hi = min(rx, ry), max(rx, ry)
            parent[hi] = lo

    xs = sorted(xs)
    for x in xs[1:]:
        union(xs[0], x)
    changed = True
    while changed:
        changed = False
        pts = sorted(a.points)
        for x in pts:
            for y in pts:
                if x < y and find(x) == find(y):
                    for s in a.top:
                        u, v = a.plus(x, s), a.plus(y, s)
                        if find(u) != find(v):
                            union(u, v)
                            changed = True
    classes: dict[int, list[int]] = {}
    for x in a.points:
        classes.setdefault(find(x), []).append(x)
    return FrozenMap((x, min(c)) for c in classes.values() for x in c)


def congruence_closed_form(a: Action, xs: Iterable[int]) -> FrozenMap:
    """x R x' iff x = x' or x = x₁ + s, x' = x₁' + s' with x₁, x₁' ∈ X₁ and s − s' ∈ S₁."""
    xs = frozenset(xs)
    s1 = stabiliser(a, xs)
    g = a.group
    rel = {x: {x} for x in a.points}
    for x1 in xs:
        for x2 in xs:
            for s in a.top:
                for t in a.top:
                    if g.sub(s, t) in s1:
                        rel[a.plus(x1, s)].add(a.plus(x2, t))
    return FrozenMap((x, min(r)) for x, r in rel.items())


def _quotient_action(a: Action, rep: FrozenMap) -> Action:
    pts = frozenset(rep.values())
    act = FrozenMap(((c, s), rep[a.plus(c, s)]) for c in sorted(pts) for s in sorted(a.top))
    q = Action(pts, a.group, a.top, act)
    return q if a.sub is None else q.with_sub(q.fix())


def image_data(f: ActArrow) -> tuple[frozenset, frozenset]:
    """(Y₁, T₁): T₁ spanned by operators linking points of fX, Y₁ = fX + T₁."""
    b = f.cod
    fx = f.fp.image(f.dom.points)
    t1 = closure(b.group, linking(b, fx))
    y1 = frozenset(b.plus(y, t) for y in fx for t in t1)
    return y1, t1


# ---------------------------------------------------------------- categories


def _point_maps(a: Action, b: Action, fs: FrozenMap) -> Iterator[FrozenMap]:
    """Pointed maps X -> Y consistent with the operator map fs."""
    reps, seen = [], set()
    for x in sorted(a.points):
        if x not in seen:
            reps.append(x)
            seen |= a.orbit(x)

    def spread(r, y, acc):
        for s in a.top:
            x, v = a.plus(r, s), b.plus(y, fs[s])
            if acc.setdefault(x, v) != v:
                return False
        return True

    choices = [[0]] + [sorted(b.points)] * (len(reps) - 1)
    for ys in itertools.product(*choices):
        acc: dict = {}
        if all(spread(r, y, acc) for r, y in zip(reps, ys)):
            fp = FrozenMap(acc)
            if all(fp[a.plus(x, s)] == b.plus(fp[x], fs[s]) for x in a.points for s in a.top):
                yield fp


def _group_maps(a: Action, b: Action) -> Iterator[FrozenMap]:
    yield from homomorphisms(a.group, b.group, a.top, b.top)


def enumerate_actions(g: FinGroup, n: int) -> list[Action]:
    """Right actions of g on {0, ..., n-1}, up to relabelling the non-base points."""
    gens = []
    span: frozenset = frozenset({0})
    for x in g.elements:
        if x not in span:
            gens.append(x)
            span = closure(g, span | {x})
    perms = list(itertools.permutations(range(n)))
    found = {}
    for choice in itertools.product(perms, repeat=len(gens)):
        rows = {0: tuple(range(n))}
        frontier = [0]
        ok = True
        while frontier and ok:
            s = frontier.pop()
            for gen, p in zip(gens, choice):
                t = g.add(s, gen)
                row = tuple(p[rows[s][x]] for x in range(n))
                if t in rows:
                    if rows[t] != row:
                        ok = False
                        break
                else:
                    rows[t] = row
                    frontier.append(t)
        if not ok or len(rows) != g.size:
            continue
        if any(rows[g.add(s, t)] != tuple(rows[t][rows[s][x]] for x in range(n)) for s in g.elements for t in g.elements):
            continue
        key = _canonical_rows(rows, g, n)
        found.setdefault(key, rows)
    out = []
    for key in sorted(found):
        rows = found[key]
        table = [[rows[s][x] for s in g.elements] for x in range(n)]
        out.append(_canonical_action(g, n, table))
    return out


def _relabellings(n: int):
    for p in itertools.permutations(range(1, n)):
        yield (0,) + p


def _canonical_rows(rows, g, n):
    best = None
    for p in _relabellings(n):
        inv = [0] * n
        for i, v in enumerate(p):
            inv[v] = i
        key = tuple(tuple(p[rows[s][inv[x]]] for x in range(n)) for s in g.elements)
        if best is None or key < best:
            best = key
    return best


def _canonical_action(g, n, table):
    rows = {s: tuple(table[x][s] for x in range(n)) for s in g.elements}
    key = _canonical_rows(rows, g, n)
    canon = [[key[s][x] for s in g.elements] for x in range(n)]
    return action(range(n), g, canon)


class _ActBase(Category):
    quasi = False

    def compose(self, g, f):
        if f.cod != g.dom:
            raise CategoryError("not composable")
        return ActArrow(f.dom, g.cod, g.fp.compose_after(f.fp), g.fs.compose_after(f.fs))

    def identity(self, a):
        return ActArrow(a, a, identity_map(a.points), identity_map(a.top))

    def is_null(self, f):
        return f.fp.image(f.dom.points) == {0}

    def _bijective(self, f) -> bool:
        return (len(set(f.fp.values())) == len(f.dom.points) and set(f.fp.values()) == f.cod.points
                and len(set(f.fs.values())) == len(f.dom.top) and set(f.fs.values()) == f.cod.top)

    def is_iso(self, f):
        a, b = f.dom, f.cod
        if not self._bijective(f):
            return False
        if any(f.fs[a.group.add(s, t)] != b.group.add(f.fs[s], f.fs[t]) for s in a.top for t in a.top):
            return False
        return a.sub is None or f.fs.image(a.sub) == b.sub

    def inverse(self, f):
        if not self.is_iso(f):
            raise CategoryError("not an isomorphism")
        inv = lambda m: FrozenMap((v, k) for k, v in m.items_sorted())
        return ActArrow(f.cod, f.dom, inv(f.fp), inv(f.fs))

    def kernel(self, f):
        return f.fp.preimage({0})

    def normal_image(self, f):
        return image_data(f)[0]

    def subobject(self, a, x):
        x = frozenset(x)
        s1 = stabiliser(a, x)
        act = FrozenMap(((p, s), a.plus(p, s)) for p in sorted(x) for s in sorted(s1))
        sub = Action(x, a.group, s1, act, a.sub)
        return ActArrow(sub, a, identity_map(x), identity_map(s1))

    def quotient(self, a, x):
        rep = congruence(a, x)
        return ActArrow(a, _quotient_action(a, rep), rep, identity_map(a.top))

    def lift(self, m, h):
        fp = FrozenMap((k, v) for k, v in h.fp.items_sorted())
        if not set(fp.values()) <= m.dom.points or not set(h.fs.values()) <= m.dom.top:
            raise CategoryError("map does not factor through the subobject")
        # m is an inclusion on both components
        return ActArrow(h.dom, m.dom, fp, h.fs)

    def descend(self, p, h):
        out: dict = {}
        for x, px in p.fp.items_sorted():
            if out.setdefault(px, h.fp[x]) != h.fp[x]:
                raise CategoryError("map does not factor through the quotient")
        inv = {v: k for k, v in p.fs.items_sorted()}
        fs = FrozenMap((t, h.fs[inv[t]]) for t in sorted(p.cod.top))
        return ActArrow(p.cod, h.cod, FrozenMap(out), fs)

    def nsb(self, a):
        rest = sorted(a.points - {0})
        subs = []
        for r in range(len(rest) + 1):
            for c in itertools.combinations(rest, r):
                xs = frozenset(c) | {0}
                if is_normal_subset(a, xs):
                    subs.append(xs)
        return canon_sort(subs)

    def sub_leq(self, a, x, y):
        return x <= y

    def sub_bottom(self, a):
        return frozenset({0})

    def sub_top(self, a):
        return a.points

    def sub_meet(self, a, x, y):
        return x & y

    def sub_join(self, a, x, y):
        return normal_join_closure(a, x | y)

    def homs(self, a, b):
        for fs in self._operator_maps(a, b):
            for fp in _point_maps(a, b, fs):
                yield ActArrow(a, b, fp, fs)

    def describe(self, x):
        if isinstance(x, ActArrow):
            return f"{x.dom!r}->{x.cod!r}:f'={dict(x.fp.items_sorted())},f''={dict(x.fs.items_sorted())}"
        return repr(x)


class Act(_ActBase):
    name = "Act"

    def _operator_maps(self, a, b):
        return _group_maps(a, b)

    def objects(self, bounds: Bounds):
        out = []
        for g in small_groups(bounds.group_order):
            for n in range(1, bounds.set_size + 1):
                out.extend(enumerate_actions(g, n))
        return out

    def zero_object(self):
        g = trivial_group()
        return Action(frozenset({0}), g, frozenset({0}), FrozenMap({(0, 0): 0}))

    def to_zero(self, a):
        z = self.zero_object()
        return ActArrow(a, z, FrozenMap((x, 0) for x in a.points), FrozenMap((s, 0) for s in a.top))

    def from_zero(self, b):
        z = self.zero_object()
        return ActArrow(z, b, FrozenMap({0: 0}), FrozenMap({0: 0}))


class ActPrime(_ActBase):
    """Actions (X, S) carrying S₀ = Fix_S(0_X); operator maps are quasi-homomorphisms (S, S₀) -> (T, T₀)."""

    name = "Act'"
    quasi = True

    def _operator_maps(self, a, b):
        return quasi_maps(a.pair(), b.pair())

    def objects(self, bounds: Bounds):
        return [to_prime(a) for a in ACT.objects(bounds)]

    def zero_object(self):
        return ACT.zero_object().with_sub({0})

    def to_zero(self, a):
        z = self.zero_object()
        return ActArrow(a, z, FrozenMap((x, 0) for x in a.points), FrozenMap((s, 0) for s in a.top))

    def from_zero(self, b):
        z = self.zero_object()
        return ActArrow(z, b, FrozenMap({0: 0}), FrozenMap({0: 0}))

    def is_iso(self, f):
        # the inverse of a bijective quasi-hom need not be a hom, only a quasi-hom
        if not self._bijective(f):
            return False
        inv = lambda m: FrozenMap((v, k) for k, v in m.items_sorted())
        return arrow_violation(ActArrow(f.cod, f.dom, inv(f.fp), inv(f.fs)), quasi=True) is None


def _rkey(f: ActArrow) -> tuple:
    T, T0 = f.cod.group, f.cod.sub
    return tuple((s, min(T.add(t, fs) for t in T0)) for s, fs in f.fs.items_sorted())


class Nac(ActPrime):
    """Act′ modulo R: f ~ g iff f′ = g′ and f″s − g″s ∈ T₀ for all s."""

    name = "Nac"

    def same(self, f, g):
        return f.dom == g.dom and f.cod == g.cod and f.fp == g.fp and _rkey(f) == _rkey(g)

    def _inverse_or_none(self, f):
        fp = f.fp
        if len(set(fp.values())) != len(f.dom.points) or set(fp.values()) != f.cod.points:
            return None
        back = FrozenMap((v, k) for k, v in fp.items_sorted())
        allowed = inverse_choices(f.fs, f.dom.pair(), f.cod.pair())
        if allowed is None:
            return None
        a, b = f.dom, f.cod
        # the point map is forced, so each operator must also move the points compatibly
        allowed = {t: [s for s in ss if all(back[b.plus(y, t)] == a.plus(back[y], s) for y in b.points)]
                   for t, ss in allowed.items()}
        one_a, one_b = self.identity(f.dom), self.identity(f.cod)
        for fs in quasi_maps(f.cod.pair(), f.dom.pair(), allowed):
            g = ActArrow(f.cod, f.dom, back, fs)
            if arrow_violation(g, quasi=True):
                continue
            if self.same(self.compose(g, f), one_a) and self.same(self.compose(f, g), one_b):
                return g
        return None

    def is_iso(self, f):
        return self._inverse_or_none(f) is not None

    def inverse(self, f):
        g = self._inverse_or_none(f)
        if g is None:
            raise CategoryError("not an isomorphism in Nac")
        return g

    def homs(self, a, b):
        seen = set()
        for f in super().homs(a, b):
            key = (f.fp, _rkey(f))
            if key not in seen:
                seen.add(key)
                yield f


ACT = Act()
ACT_PRIME = ActPrime()
NAC = Nac()


def nac_instance() -> Nac:
    return NAC


# ---------------------------------------------------------------- kernels, cokernels, factorisation


@dataclass(frozen=True)
class NormalSubaction:
    points: frozenset
    operators: frozenset


def act_kernel(f: ActArrow) -> NormalSubaction:
    """X₁ = f′⁻¹{0}; the descriptions of S₁ are cross-checked."""
    a, b = f.dom, f.cod
    x1 = f.fp.preimage({0})
    t0 = b.fix() if b.sub is None else b.sub
    forms = [
        stabiliser(a, x1),
        frozenset(s for s in a.top if all(a.plus(x, s) in x1 for x in x1) and {a.plus(x, s) for x in x1} == x1),
        linking(a, x1),
    ]
    if b.sub is None:
        forms.append(f.fs.preimage(t0))
        forms.append(frozenset(s for s in a.top if b.plus(0, f.fs[s]) == 0))
    if any(v != forms[0] for v in forms):
        raise AssertionError("descriptions of the kernel operators disagree")
    return NormalSubaction(x1, forms[0])


def act_cokernel(f: ActArrow) -> ActArrow:
    b = f.cod
    y1 = image_data(f)[0]
    rep = congruence(b, f.fp.image(f.dom.points))
    if rep != congruence(b, y1) or rep != congruence_closed_form(b, y1):
        raise AssertionError("descriptions of the cokernel congruence disagree")
    return ActArrow(b, _quotient_action(b, rep), rep, identity_map(b.top))


def act_factorise(f: ActArrow, category: _ActBase | None = None) -> NormalFactorisation:
    """Normal factorisation with the explicit formulas audited against the generic one."""
    C = category or (ACT if f.dom.sub is None else ACT_PRIME)
    fact = normal_factorise(C, f, audit=True)
    k = act_kernel(f)
    if fact.ker.dom.points != k.points or fact.ker.dom.top != k.operators:
        raise AssertionError("kernel disagrees with the explicit formula")
    y1, t1 = image_data(f)
    if fact.nim.dom.points != y1 or fact.nim.dom.top != t1:
        raise AssertionError("normal image disagrees with the explicit formula")
    cok = act_cokernel(f)
    if cok.cod.fix() != t1:
        raise AssertionError("T₁ differs from the operators fixing the base class of the cokernel")
    rep = congruence(f.dom, k.points)
    if rep != congruence_closed_form(f.dom, k.points):
        raise AssertionError("coimage congruence disagrees with its closed form")
    if f.dom.sub is not None and not (f.dom.sub <= k.operators and f.cod.sub <= t1):
        raise AssertionError("S₀ ⊆ S₁ or T₀ ⊆ T₁ fails")
    return fact


def actprime_factorise(f: ActArrow) -> NormalFactorisation:
    return act_factorise(f, ACT_PRIME)


# ---------------------------------------------------------------- functors


def functor_U(z: PointedSet) -> Action:
    g = trivial_group()
    return Action(z.points, g, frozenset({0}), FrozenMap(((x, 0), x) for x in sorted(z.points)))


def functor_U_map(f: Arrow) -> ActArrow:
    return ActArrow(functor_U(f.dom), functor_U(f.cod), f.fn, FrozenMap({0: 0}))


def orbit_rep(a: Action) -> FrozenMap:
    return FrozenMap((x, min(a.orbit(x))) for x in a.points)


def functor_V(a: Action) -> PointedSet:
    return PointedSet(frozenset(orbit_rep(a).values()))


def functor_V_map(f: ActArrow) -> Arrow:
    rb = orbit_rep(f.cod)
    return Arrow(functor_V(f.dom), functor_V(f.cod),
                 FrozenMap((x, rb[f.fp[x]]) for x in sorted(functor_V(f.dom).points)))


def functor_F(p: GroupPair) -> Action:
    """Right cosets S₀ + s, named by least member, with S acting on the right."""
    g = p.group
    cs = cosets_in(g, p.sub, p.top)
    name = {x: min(c) for c in cs for x in c}
    pts = frozenset(name.values())
    act = FrozenMap(((c, s), name[g.add(c, s)]) for c in sorted(pts) for s in sorted(p.top))
    return Action(pts, g, p.top, act)


def functor_F_map(f: Arrow) -> ActArrow:
    a, b = functor_F(f.dom), functor_F(f.cod)
    name_b = {x: min(c) for c in cosets_in(f.cod.group, f.cod.sub, f.cod.top) for x in c}
    return ActArrow(a, b, FrozenMap((c, name_b[f.fn[c]]) for c in sorted(a.points)), f.fn)


def functor_G(a: Action) -> GroupPair:
    return GroupPair(a.group, a.top, a.fix())


def functor_G_map(f: ActArrow) -> Arrow:
    return Arrow(functor_G(f.dom), functor_G(f.cod), f.fs)


def functor_FI(g: FinGroup) -> Action:
    """A group acting on its own underlying pointed set by right translation."""
    els = frozenset(g.elements)
    return Action(els, g, els, FrozenMap(((x, s), g.add(x, s)) for x in g.elements for s in g.elements))


def functor_FI_map(f: Arrow) -> ActArrow:
    return ActArrow(functor_FI(f.dom), functor_FI(f.cod), f.fn, f.fn)


def counit(a: Action) -> ActArrow:
    """FG(X, S) -> (X, S), S₀ + s ↦ 0 + s; an isomorphism when the action is transitive."""
    fa = functor_F(functor_G(a))
    return ActArrow(fa, a, FrozenMap((c, a.plus(0, c)) for c in sorted(fa.points)), identity_map(a.top))


def is_transitive(a: Action) -> bool:
    return a.orbit(0) == a.points


def to_prime(a: Action) -> Action:
    return a.with_sub(a.fix())


def to_prime_map(f: ActArrow) -> ActArrow:
    return ActArrow(to_prime(f.dom), to_prime(f.cod), f.fp, f.fs)


FUNCTOR_U = Functor("U", SETPT, ACT, functor_U, functor_U_map)
FUNCTOR_V = Functor("V", ACT, SETPT, functor_V, functor_V_map)
FUNCTOR_F = Functor("F", GP2, ACT, functor_F, functor_F_map)
FUNCTOR_G = Functor("G", ACT, GP2, functor_G, functor_G_map)
FUNCTOR_FI = Functor("FI", GP, ACT, functor_FI, functor_FI_map)
EMBED_ACT_PRIME = Functor("Act->Act'", ACT, ACT_PRIME, to_prime, to_prime_map)
FUNCTOR_P_ACT = Functor("P", ACT, NAC, to_prime, to_prime_map)


# ---------------------------------------------------------------- Σ in Nac


def sigma_projection_act(a: Action, n: Iterable[int]) -> ActArrow:
    """p: (X, S) -> (X, S/N) for a normal N acting trivially; S/N is named by least coset members."""
    n = frozenset(n)
    g = a.group
    if a.top != frozenset(g.elements):
        raise CategoryError("Σ projections are built on actions of the whole ambient group")
    if not g.is_normal(n):
        raise CategoryError("N is not a normal subgroup")
    if any(a.plus(x, s) != x for x in a.points for s in n):
        raise CategoryError("N does not act trivially")
    from .finite import quotient_group

    qg, proj = quotient_group(g, n)
    act = FrozenMap(((x, c), a.plus(x, min(s for s in g.elements if proj[s] == c))) for x in sorted(a.points)
                    for c in qg.elements)
    b = Action(a.points, qg, frozenset(qg.elements), act)
    return ActArrow(a, b, identity_map(a.points), FrozenMap(enumerate(proj)))


def nac_sigma_invert(p: ActArrow) -> ActArrow:
    """Inverse in Nac of P(p) for p in Σ, via the least-representative section of S -> S/N."""
    a, b = p.dom, p.cod
    if p.fp != identity_map(a.points) or a.points != b.points:
        raise CategoryError("Σ maps are the identity on points")
    n = p.fs.preimage({0})
    g = a.group
    if not g.is_normal(n):
        raise CategoryError("kernel of the operator map is not normal")
    if set(p.fs.values()) != b.top or arrow_violation(p):
        raise CategoryError("not a quotient of the operator group")
    if any(a.plus(x, s) != x for x in a.points for s in n):
        raise CategoryError("N does not act trivially")
    pa, pb = to_prime(a), to_prime(b)
    phat = ActArrow(pa, pb, p.fp, p.fs)
    section = FrozenMap((c, min(p.fs.preimage({c}))) for c in sorted(b.top))
    jhat = ActArrow(pb, pa, p.fp, section)
    problem = arrow_violation(jhat, quasi=True)
    if problem:
        raise AssertionError(f"section is not an Act' map: {problem}")
    if not (NAC.same(NAC.compose(jhat, phat), NAC.identity(pa)) and NAC.same(NAC.compose(phat, jhat), NAC.identity(pb))):
        raise AssertionError("section does not invert the projection in Nac")
    return jhat


# ---------------------------------------------------------------- exactness from groups to pointed sets


@dataclass
class MixedReport:
    """Categorical exactness at each spot next to the stated condition."""

    clauses: dict
    f_exact: bool
    g_right_modular: bool
    classical_fibre: bool

    @property
    def consistent(self) -> bool:
        return all(c["exact"] == c["stated"] for c in self.clauses.values()) and self.f_exact and self.g_right_modular


def mixed_sequence_exactness(u: Arrow, v: Arrow, a: Action, g, y: PointedSet, h) -> MixedReport:
    """Exactness of H -u-> G -v-> S -f-> (X, S) -g-> Y -h-> Z, with f(s) = 0 + s.

    u and v are Gp arrows, g maps X to the pointed set y and h maps y onward.
    """
    from .nsb import is_right_modular_on

    S = v.cod
    if u.cod != v.dom or a.group != S or a.top != frozenset(S.elements):
        raise CategoryError("sequence shape mismatch")
    gfn = FrozenMap(g) if not isinstance(g, FrozenMap) else g
    hfn = FrozenMap(h) if not isinstance(h, FrozenMap) else h
    if set(gfn) != a.points or not set(gfn.values()) <= y.points or gfn[0] != 0:
        raise CategoryError("g must be a pointed map from X to Y")
    if any(gfn[a.plus(x, s)] != gfn[x] for x in a.points for s in a.top):
        raise CategoryError("g must be constant on orbits")
    if set(hfn) != y.points or hfn[0] != 0:
        raise CategoryError("h must be a pointed map on Y")
    z = PointedSet(frozenset(hfn.values()) | {0})
    U_, V_ = functor_FI_map(u), functor_FI_map(v)
    fs = functor_FI(S)
    f = ActArrow(fs, a, FrozenMap((s, a.plus(0, s)) for s in S.elements), identity_map(S.elements))
    uy = functor_U(y)
    G_ = ActArrow(a, uy, gfn, FrozenMap((s, 0) for s in a.top))
    H_ = functor_U_map(Arrow(y, z, hfn))
    img_u = u.fn.image(u.dom.elements)
    ker_v = v.fn.preimage({0})
    img_v = v.fn.image(v.dom.elements)
    orbit0 = a.orbit(0)
    clauses = {
        "a": {"exact": is_exact_at(ACT, U_, V_), "stated": img_u == ker_v},
        "b": {"exact": is_exact_at(ACT, V_, f), "stated": img_v == ACT.kernel(f) == a.fix()},
        "c": {"exact": is_exact_at(ACT, f, G_), "stated": orbit0 == gfn.preimage({0})},
        "d": {"exact": is_exact_at(ACT, G_, H_), "stated": gfn.image(a.points) == hfn.preimage({0})},
    }
    right_mod = all(is_right_modular_on(ACT, G_, yy) for yy in ACT.nsb(uy))
    image_check = all(
        G_.fp.image(G_.fp.preimage(yy)) == yy & G_.fp.image(a.points) for yy in ACT.nsb(uy)
    )
    classical = orbit0 == gfn.preimage({0}) and all(
        (gfn[x] == gfn[x2]) == (x2 in a.orbit(x)) for x in a.points for x2 in a.points
    )
    return MixedReport(clauses, is_exact_morphism(ACT, f), right_mod and image_check, classical)
