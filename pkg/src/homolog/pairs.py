"""Pairs of sets and pairs of groups: Set₂, Set•, Gp, Gp₂, Q and Ngp.

Objects of Set₂ are pairs (X, X₀) of finite sets; objects of Gp₂, Q and Ngp are
pairs (S, S₀) where S and S₀ are subgroups of a common ambient finite group.
Normal monos of these categories are inclusions and normal epis are identities
on elements, so normal subobjects are labelled by the middle set or subgroup.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .core import Bounds, Category, CategoryError, Functor
from .finite import (
    FinGroup,
    FrozenMap,
    closure,
    homomorphisms,
    identity_map,
    normal_closure,
    quotient_group,
    small_groups,
    subgroups,
    trivial_group,
)


def canon_sort(xs: Iterable[frozenset]) -> list[frozenset]:
    return sorted(set(xs), key=lambda s: (len(s), sorted(s)))


@dataclass(frozen=True)
class Arrow:
    """A morphism carried by a single element map."""

    dom: object
    cod: object
    fn: FrozenMap

    def __call__(self, x):
        return self.fn[x]


def _lift_fn(h_fn: FrozenMap, target: frozenset) -> FrozenMap:
    if not set(h_fn.values()) <= target:
        raise CategoryError("map does not factor through the given subobject")
    return h_fn


def _descend_fn(p_fn: FrozenMap, h_fn: FrozenMap) -> FrozenMap:
    out: dict = {}
    for x, px in p_fn.items_sorted():
        hx = h_fn[x]
        if out.setdefault(px, hx) != hx:
            raise CategoryError("map does not factor through the given quotient")
    return FrozenMap(out)


def _bijective(fn: FrozenMap, target: frozenset) -> bool:
    vals = set(fn.values())
    return len(vals) == len(fn) and vals == set(target)


def _invert(fn: FrozenMap) -> FrozenMap:
    return FrozenMap((v, k) for k, v in fn.items_sorted())


def all_maps(xs: Iterable, ys: Iterable) -> Iterator[FrozenMap]:
    xs, ys = sorted(xs), sorted(ys)
    for vals in itertools.product(ys, repeat=len(xs)):
        yield FrozenMap(zip(xs, vals))


# ====================================================================== Set₂


@dataclass(frozen=True)
class SetPair:
    X: frozenset
    X0: frozenset

    def __post_init__(self):
        object.__setattr__(self, "X", frozenset(self.X))
        object.__setattr__(self, "X0", frozenset(self.X0))
        if not self.X0 <= self.X:
            raise CategoryError("X0 must be contained in X")

    def __repr__(self):
        return f"({sorted(self.X)},{sorted(self.X0)})"


def set_pair(n: int, x0: Iterable[int]) -> SetPair:
    return SetPair(frozenset(range(n)), frozenset(x0))


def set_pair_map(dom: SetPair, cod: SetPair, table) -> Arrow:
    fn = FrozenMap(enumerate(table)) if isinstance(table, (list, tuple)) else FrozenMap(table)
    if set(fn) != dom.X or not set(fn.values()) <= cod.X:
        raise CategoryError("map table does not match the carriers")
    if not fn.image(dom.X0) <= cod.X0:
        raise CategoryError("map does not send X0 into Y0")
    return Arrow(dom, cod, fn)


class Set2(Category):
    name = "Set2"

    def compose(self, g, f):
        if f.cod != g.dom:
            raise CategoryError("not composable")
        return Arrow(f.dom, g.cod, g.fn.compose_after(f.fn))

    def identity(self, a):
        return Arrow(a, a, identity_map(a.X))

    def is_null(self, f):
        return f.fn.image(f.dom.X) <= f.cod.X0

    def is_iso(self, f):
        return _bijective(f.fn, f.cod.X) and f.fn.image(f.dom.X0) == f.cod.X0

    def inverse(self, f):
        if not self.is_iso(f):
            raise CategoryError("not an isomorphism")
        return Arrow(f.cod, f.dom, _invert(f.fn))

    def kernel(self, f):
        return f.fn.preimage(f.cod.X0)

    def normal_image(self, f):
        return f.cod.X0 | f.fn.image(f.dom.X)

    def subobject(self, a, x):
        return Arrow(SetPair(x, a.X0), a, identity_map(x))

    def quotient(self, a, x):
        return Arrow(a, SetPair(a.X, x), identity_map(a.X))

    def lift(self, m, h):
        fn = _lift_fn(h.fn, m.dom.X)
        return Arrow(h.dom, m.dom, fn)

    def descend(self, p, h):
        fn = _descend_fn(p.fn, h.fn)
        out = Arrow(p.cod, h.cod, fn)
        if not fn.image(p.cod.X0) <= h.cod.X0:
            raise CategoryError("map does not factor through the given quotient")
        return out

    def nsb(self, a):
        free = sorted(a.X - a.X0)
        subs = [a.X0 | frozenset(c) for r in range(len(free) + 1) for c in itertools.combinations(free, r)]
        return canon_sort(subs)

    def sub_leq(self, a, x, y):
        return x <= y

    def sub_meet(self, a, x, y):
        return x & y

    def sub_join(self, a, x, y):
        return x | y

    def objects(self, bounds: Bounds):
        return [set_pair(n, range(k)) for n in range(bounds.set_size + 1) for k in range(n + 1)]

    def homs(self, a, b):
        for fn in all_maps(a.X, b.X):
            if fn.image(a.X0) <= b.X0:
                yield Arrow(a, b, fn)

    def null_map(self, a, b):
        if not b.X0:
            raise CategoryError("no null map into a pair with empty X0")
        y = min(b.X0)
        return Arrow(a, b, FrozenMap((x, y) for x in a.X))

    def describe(self, x):
        if isinstance(x, Arrow):
            return f"{x.dom!r}->{x.cod!r}:{dict(x.fn.items_sorted())}"
        return repr(x)


def set2_factorise(f: Arrow):
    from .core import normal_factorise

    return normal_factorise(SET2, f)


def set2_tensor(p: SetPair, q: SetPair) -> tuple[SetPair, dict]:
    """Tensor product; returns the pair and the encoding (x, y) -> element."""
    enc = {(x, y): i for i, (x, y) in enumerate(itertools.product(sorted(p.X), sorted(q.X)))}
    X0 = {enc[(x, y)] for (x, y) in enc if x in p.X0 or y in q.X0}
    return SetPair(frozenset(enc.values()), frozenset(X0)), enc


def set2_hom(p: SetPair, q: SetPair) -> tuple[SetPair, list[FrozenMap]]:
    """Internal hom: all pair maps, with the null ones as distinguished subset."""
    maps = [f.fn for f in SET2.homs(p, q)]
    null = {i for i, fn in enumerate(maps) if fn.image(p.X) <= q.X0}
    return SetPair(frozenset(range(len(maps))), frozenset(null)), maps


def set2_tensor_map(f: Arrow, g: Arrow) -> Arrow:
    dom, enc_d = set2_tensor(f.dom, g.dom)
    cod, enc_c = set2_tensor(f.cod, g.cod)
    return Arrow(dom, cod, FrozenMap((enc_d[(x, y)], enc_c[(f.fn[x], g.fn[y])]) for (x, y) in enc_d))


UNIT = SetPair(frozenset({0}), frozenset())


def set2_classifier() -> tuple[Arrow, SetPair]:
    """The map t: ({*},{*}) -> ({0,1},{1}) picking 1, and Ω = ({0,1},{1})."""
    omega = SetPair(frozenset({0, 1}), frozenset({1}))
    point = SetPair(frozenset({0}), frozenset({0}))
    return Arrow(point, omega, FrozenMap({0: 1})), omega


def characteristic_map(a: SetPair, sub: frozenset) -> Arrow:
    _, omega = set2_classifier()
    return Arrow(a, omega, FrozenMap((x, 1 if x in sub else 0) for x in a.X))


def classifier_audit(a: SetPair) -> bool:
    """Each normal subobject of a is the pullback of t along exactly one map."""
    t, omega = set2_classifier()
    for sub in SET2.nsb(a):
        chis = [f for f in SET2.homs(a, omega) if f.fn.preimage({1}) == sub]
        if len(chis) != 1 or chis[0] != characteristic_map(a, sub):
            return False
    return True


# ====================================================================== Set•


@dataclass(frozen=True)
class PointedSet:
    """Finite pointed set whose base point is the element 0."""

    points: frozenset

    def __post_init__(self):
        object.__setattr__(self, "points", frozenset(self.points))
        if 0 not in self.points:
            raise CategoryError("pointed set must contain the base point 0")

    @property
    def size(self) -> int:
        return len(self.points)

    def __repr__(self):
        return f"*{sorted(self.points)}"


def pointed(n: int) -> PointedSet:
    return PointedSet(frozenset(range(n)))


class SetPt(Category):
    name = "Set*"

    def compose(self, g, f):
        if f.cod != g.dom:
            raise CategoryError("not composable")
        return Arrow(f.dom, g.cod, g.fn.compose_after(f.fn))

    def identity(self, a):
        return Arrow(a, a, identity_map(a.points))

    def is_null(self, f):
        return f.fn.image(f.dom.points) == {0}

    def is_iso(self, f):
        return _bijective(f.fn, f.cod.points)

    def inverse(self, f):
        if not self.is_iso(f):
            raise CategoryError("not an isomorphism")
        return Arrow(f.cod, f.dom, _invert(f.fn))

    def kernel(self, f):
        return f.fn.preimage({0})

    def normal_image(self, f):
        return f.fn.image(f.dom.points)

    def subobject(self, a, x):
        return Arrow(PointedSet(x), a, identity_map(x))

    def quotient(self, a, x):
        q = PointedSet((a.points - x) | {0})
        return Arrow(a, q, FrozenMap((p, 0 if p in x else p) for p in a.points))

    def lift(self, m, h):
        return Arrow(h.dom, m.dom, _lift_fn(h.fn, m.dom.points))

    def descend(self, p, h):
        return Arrow(p.cod, h.cod, _descend_fn(p.fn, h.fn))

    def nsb(self, a):
        free = sorted(a.points - {0})
        return canon_sort(frozenset({0, *c}) for r in range(len(free) + 1) for c in itertools.combinations(free, r))

    def sub_leq(self, a, x, y):
        return x <= y

    def sub_meet(self, a, x, y):
        return x & y

    def sub_join(self, a, x, y):
        return x | y

    def objects(self, bounds: Bounds):
        return [pointed(n) for n in range(1, bounds.set_size + 1)]

    def homs(self, a, b):
        rest = sorted(a.points - {0})
        for vals in itertools.product(sorted(b.points), repeat=len(rest)):
            yield Arrow(a, b, FrozenMap([(0, 0), *zip(rest, vals)]))

    def zero_object(self):
        return PointedSet(frozenset({0}))

    def to_zero(self, a):
        return Arrow(a, self.zero_object(), FrozenMap((x, 0) for x in a.points))

    def from_zero(self, b):
        return Arrow(self.zero_object(), b, FrozenMap({0: 0}))

    def describe(self, x):
        if isinstance(x, Arrow):
            return f"{x.dom!r}->{x.cod!r}:{dict(x.fn.items_sorted())}"
        return repr(x)


def setpt_factorise(f: Arrow):
    from .core import normal_factorise

    return normal_factorise(SETPT, f)


def functor_P_set2(a: SetPair) -> PointedSet:
    """X/X₀: X₀ collapses to the base point 0; other x become x + 1."""
    return PointedSet(frozenset({0} | {x + 1 for x in a.X - a.X0}))


def functor_P_set2_map(f: Arrow) -> Arrow:
    def img(x):
        return 0 if x in f.dom.X0 else x + 1

    def val(x):
        y = f.fn[x]
        return 0 if y in f.cod.X0 else y + 1

    fn = {0: 0}
    for x in f.dom.X - f.dom.X0:
        fn[img(x)] = val(x)
    return Arrow(functor_P_set2(f.dom), functor_P_set2(f.cod), FrozenMap(fn))


# ====================================================================== groups


@dataclass(frozen=True)
class GroupPair:
    """(S, S₀) with S₀ ≤ S ≤ group; `top` is S and `sub` is S₀."""

    group: FinGroup = field(repr=False)
    top: frozenset
    sub: frozenset

    def __post_init__(self):
        object.__setattr__(self, "top", frozenset(self.top))
        object.__setattr__(self, "sub", frozenset(self.sub))

    def validate(self) -> None:
        g = self.group
        if not self.sub <= self.top:
            raise CategoryError("S0 must be contained in S")
        for part in (self.top, self.sub):
            if not g.is_subgroup(part):
                raise CategoryError("not a subgroup")

    def __repr__(self):
        return f"({self.group.name or self.group.size}:{sorted(self.top)},{sorted(self.sub)})"


def group_pair(g: FinGroup, sub: Iterable[int] = (0,), top: Iterable[int] | None = None) -> GroupPair:
    p = GroupPair(g, frozenset(g.elements if top is None else top), frozenset(sub) | {0})
    p.validate()
    return p


def intermediate_subgroups(g: FinGroup, low: frozenset, high: frozenset) -> list[frozenset]:
    found = {low}
    frontier = [low]
    extra = sorted(high - low)
    while frontier:
        h = frontier.pop()
        for x in extra:
            if x not in h:
                j = closure(g, h | {x})
                if j not in found:
                    found.add(j)
                    frontier.append(j)
    return canon_sort(found)


def is_quasi_hom(f, dom: GroupPair, cod: GroupPair) -> bool:
    """Quasi-homomorphism test; both finite forms of the condition are evaluated and must agree."""
    fn = f if isinstance(f, FrozenMap) else FrozenMap(enumerate(f)) if isinstance(f, (list, tuple)) else FrozenMap(f)
    if set(fn) != dom.top or not set(fn.values()) <= cod.top:
        return False
    if not fn.image(dom.sub) <= cod.sub:
        return False
    d = _quasi_d(fn, dom, cod)
    d2 = _quasi_d_prime(fn, dom, cod)
    if d != d2:
        raise AssertionError("the two quasi-homomorphism conditions disagree")
    return d


def _quasi_d(fn, dom, cod) -> bool:
    S, T, T0 = dom.group, cod.group, cod.sub
    for s in dom.top:
        fs = fn[s]
        for s2 in dom.top:
            for eps in (s2, S.neg(s2)):
                feps = fn[s2] if eps == s2 else T.neg(fn[s2])
                # f(s + εs') − εfs' − fs
                v = T.sub(T.sub(fn[S.add(s, eps)], feps), fs)
                if v not in T0:
                    return False
    return True


def _quasi_d_prime(fn, dom, cod) -> bool:
    S, T, T0 = dom.group, cod.group, cod.sub
    for s in dom.top:
        for eps_s, feps in ((s, fn[s]), (S.neg(s), T.neg(fn[s]))):
            for s2 in dom.top:
                # −f(εs + s') + εfs + fs'
                v = T.add(T.add(T.neg(fn[S.add(eps_s, s2)]), feps), fn[s2])
                if v not in T0:
                    return False
    return True


class _GroupPairBase(Category):
    """Shared structure of Gp₂, Q and Ngp: same objects, kernels and cokernels."""

    def compose(self, g, f):
        if f.cod != g.dom:
            raise CategoryError("not composable")
        return Arrow(f.dom, g.cod, g.fn.compose_after(f.fn))

    def identity(self, a):
        return Arrow(a, a, identity_map(a.top))

    def is_null(self, f):
        return f.fn.image(f.dom.top) <= f.cod.sub

    def kernel(self, f):
        return f.fn.preimage(f.cod.sub)

    def normal_image(self, f):
        return closure(f.cod.group, f.cod.sub | f.fn.image(f.dom.top))

    def subobject(self, a, x):
        return Arrow(GroupPair(a.group, x, a.sub), a, identity_map(x))

    def quotient(self, a, x):
        return Arrow(a, GroupPair(a.group, a.top, x), identity_map(a.top))

    def lift(self, m, h):
        return Arrow(h.dom, m.dom, _lift_fn(h.fn, m.dom.top))

    def descend(self, p, h):
        fn = _descend_fn(p.fn, h.fn)
        if not fn.image(p.cod.sub) <= h.cod.sub:
            raise CategoryError("map does not factor through the given quotient")
        return Arrow(p.cod, h.cod, fn)

    def nsb(self, a):
        return intermediate_subgroups(a.group, a.sub, a.top)

    def sub_leq(self, a, x, y):
        return x <= y

    def sub_meet(self, a, x, y):
        return x & y

    def sub_join(self, a, x, y):
        return closure(a.group, x | y)

    def objects(self, bounds: Bounds):
        out = []
        for g in small_groups(bounds.group_order):
            for s0 in subgroups(g):
                out.append(GroupPair(g, frozenset(g.elements), s0))
        return out

    def zero_object(self):
        return GroupPair(trivial_group(), frozenset({0}), frozenset({0}))

    def to_zero(self, a):
        return Arrow(a, self.zero_object(), FrozenMap((x, 0) for x in a.top))

    def from_zero(self, b):
        return Arrow(self.zero_object(), b, FrozenMap({0: 0}))

    def _group_iso(self, f) -> bool:
        S, T = f.dom.group, f.cod.group
        fn = f.fn
        if not _bijective(fn, f.cod.top) or fn.image(f.dom.sub) != f.cod.sub:
            return False
        top = f.dom.top
        return all(fn[S.add(a, b)] == T.add(fn[a], fn[b]) for a in top for b in top)

    def describe(self, x):
        if isinstance(x, Arrow):
            return f"{x.dom!r}->{x.cod!r}:{dict(x.fn.items_sorted())}"
        return repr(x)


class Gp2(_GroupPairBase):
    name = "Gp2"

    def is_iso(self, f):
        return self._group_iso(f)

    def inverse(self, f):
        if not self.is_iso(f):
            raise CategoryError("not an isomorphism")
        return Arrow(f.cod, f.dom, _invert(f.fn))

    def homs(self, a, b):
        for fn in homomorphisms(a.group, b.group, a.top, b.top):
            if fn.image(a.sub) <= b.sub:
                yield Arrow(a, b, fn)


class Q(_GroupPairBase):
    """Pairs of groups with quasi-homomorphisms."""

    name = "Q"

    def is_iso(self, f):
        # every isomorphism of Q is a group-pair isomorphism
        return self._group_iso(f)

    def inverse(self, f):
        if not self.is_iso(f):
            raise CategoryError("not an isomorphism")
        return Arrow(f.cod, f.dom, _invert(f.fn))

    def homs(self, a, b):
        yield from (Arrow(a, b, fn) for fn in quasi_maps(a, b))


def quasi_maps(a: GroupPair, b: GroupPair, allowed: Mapping[int, Iterable[int]] | None = None) -> Iterator[FrozenMap]:
    """All quasi-homomorphisms a -> b, by backtracking on the (d) condition.

    `allowed` optionally narrows the candidate values at each point.
    """
    S, T, T0 = a.group, b.group, b.sub
    order = sorted(a.top)
    choices = {s: sorted(b.sub) if s in a.sub else sorted(b.top) for s in order}
    if allowed is not None:
        choices = {s: [t for t in choices[s] if t in set(allowed[s])] for s in order}
    assigned: dict[int, int] = {}

    def consistent(s) -> bool:
        fs = assigned[s]
        for s2, f2 in assigned.items():
            for x, y, fx, fy in ((s, s2, fs, f2), (s2, s, f2, fs)):
                for eps, feps in ((y, fy), (S.neg(y), T.neg(fy))):
                    z = S.add(x, eps)
                    if z in assigned:
                        if T.sub(T.sub(assigned[z], feps), fx) not in T0:
                            return False
        return True

    def rec(i):
        if i == len(order):
            yield FrozenMap(assigned)
            return
        s = order[i]
        for t in choices[s]:
            assigned[s] = t
            if consistent(s):
                yield from rec(i + 1)
            del assigned[s]

    yield from rec(0)


def r_key(f: Arrow) -> tuple:
    """Canonical data of the R-class: each s goes to the least element of T₀ + f(s)."""
    T, T0 = f.cod.group, f.cod.sub
    return tuple((s, min(T.add(t, fs) for t in T0)) for s, fs in f.fn.items_sorted())


def r_equivalent(f: Arrow, g: Arrow) -> bool:
    """fs − gs ∈ T₀ for all s; the forms −fs + gs ∈ T₀ and the combination form are audited."""
    if f.dom != g.dom or f.cod != g.cod:
        raise CategoryError("R compares parallel maps only")
    T, T0 = f.cod.group, f.cod.sub
    a = all(T.sub(f.fn[s], g.fn[s]) in T0 for s in f.dom.top)
    b = all(T.add(T.neg(f.fn[s]), g.fn[s]) in T0 for s in f.dom.top)
    if a != b:
        raise AssertionError("equivalent forms of R disagree")
    return a


def r_equivalent_combinations(f: Arrow, g: Arrow, length: int = 2) -> bool:
    """The additive-combination form of R, for combinations up to `length` terms."""
    T, T0 = f.cod.group, f.cod.sub
    top = sorted(f.dom.top)
    for n in range(1, length + 1):
        for ss in itertools.product(top, repeat=n):
            for eps in itertools.product((1, -1), repeat=n):
                cf, cg = 0, 0
                for s, e in zip(ss, eps):
                    fs, gs = f.fn[s], g.fn[s]
                    cf = T.add(cf, fs if e == 1 else T.neg(fs))
                    cg = T.add(cg, gs if e == 1 else T.neg(gs))
                if T.sub(cf, cg) not in T0:
                    return False
    return True


class Ngp(_GroupPairBase):
    """Normalised groups: Q modulo R; morphisms are stored as representatives."""

    name = "Ngp"

    def same(self, f, g):
        return f.dom == g.dom and f.cod == g.cod and r_key(f) == r_key(g)

    def is_iso(self, f):
        return self._inverse_or_none(f) is not None

    def inverse(self, f):
        h = self._inverse_or_none(f)
        if h is None:
            raise CategoryError("not an isomorphism in Ngp")
        return h

    def _inverse_or_none(self, f):
        allowed = inverse_choices(f.fn, f.dom, f.cod)
        if allowed is None:
            return None
        for fn in quasi_maps(f.cod, f.dom, allowed):
            return Arrow(f.cod, f.dom, fn)
        return None

    def homs(self, a, b):
        seen = set()
        for fn in quasi_maps(a, b):
            f = Arrow(a, b, fn)
            k = r_key(f)
            if k not in seen:
                seen.add(k)
                yield f


def inverse_choices(fn: Mapping[int, int], a: GroupPair, b: GroupPair) -> dict | None:
    """For a quasi-hom a -> b, the values an R-inverse may take at each t, or None if none exists.

    The map must induce a bijection of right cosets; an inverse then sends t
    into the source coset matched with the coset of t.
    """
    src = cosets_in(a.group, a.sub, a.top)
    tgt = cosets_in(b.group, b.sub, b.top)
    t_index = {t: i for i, c in enumerate(tgt) for t in c}
    image = {}
    for c in src:
        idx = {t_index[fn[s]] for s in c}
        if len(idx) != 1:
            return None
        image[idx.pop()] = c
    if len(image) != len(src) or len(image) != len(tgt):
        return None
    return {t: sorted(image[t_index[t]]) for t in b.top}


def cosets_in(g: FinGroup, n: frozenset, top: frozenset) -> list[frozenset]:
    """Right cosets n + s of n inside the subgroup top, ordered by least member."""
    out, seen = [], set()
    ns = sorted(n)
    for s in sorted(top):
        if s not in seen:
            c = frozenset(g.add(x, s) for x in ns)
            seen |= c
            out.append(c)
    return out


# ---------------------------------------------------------------- Gp, I, K, J


class Gp(Category):
    """Groups with trivial homomorphisms as the null ideal."""

    name = "Gp"

    def compose(self, g, f):
        if f.cod != g.dom:
            raise CategoryError("not composable")
        return Arrow(f.dom, g.cod, g.fn.compose_after(f.fn))

    def identity(self, a):
        return Arrow(a, a, identity_map(a.elements))

    def is_null(self, f):
        return set(f.fn.values()) == {0}

    def is_iso(self, f):
        return _bijective(f.fn, frozenset(f.cod.elements))

    def inverse(self, f):
        if not self.is_iso(f):
            raise CategoryError("not an isomorphism")
        return Arrow(f.cod, f.dom, _invert(f.fn))

    def kernel(self, f):
        return f.fn.preimage({0})

    def normal_image(self, f):
        return normal_closure(f.cod, f.fn.values())

    def subobject(self, a, x):
        sub, emb = a.restrict(x)
        return Arrow(sub, a, FrozenMap(enumerate(emb)))

    def quotient(self, a, x):
        q, proj = quotient_group(a, x)
        return Arrow(a, q, FrozenMap(enumerate(proj)))

    def lift(self, m, h):
        pos = {v: k for k, v in m.fn.items_sorted()}
        if not set(h.fn.values()) <= set(pos):
            raise CategoryError("map does not factor through the given subobject")
        return Arrow(h.dom, m.dom, FrozenMap((z, pos[y]) for z, y in h.fn.items_sorted()))

    def descend(self, p, h):
        return Arrow(p.cod, h.cod, _descend_fn(p.fn, h.fn))

    def nsb(self, a):
        return [s for s in subgroups(a) if a.is_normal(s)]

    def sub_leq(self, a, x, y):
        return x <= y

    def sub_meet(self, a, x, y):
        return x & y

    def sub_join(self, a, x, y):
        return closure(a, x | y)

    def objects(self, bounds: Bounds):
        return small_groups(bounds.group_order)

    def homs(self, a, b):
        for fn in homomorphisms(a, b):
            yield Arrow(a, b, fn)

    def zero_object(self):
        return trivial_group()

    def to_zero(self, a):
        return Arrow(a, trivial_group(), FrozenMap((x, 0) for x in a.elements))

    def from_zero(self, b):
        return Arrow(trivial_group(), b, FrozenMap({0: 0}))

    def describe(self, x):
        if isinstance(x, Arrow):
            return f"{x.dom!r}->{x.cod!r}:{dict(x.fn.items_sorted())}"
        return repr(x)


SET2 = Set2()
SETPT = SetPt()
GP = Gp()
GP2 = Gp2()
QCAT = Q()
NGP = Ngp()


def q_factorise(f: Arrow):
    """Normal factorisation of a quasi-homomorphism; f⁻¹T₀ must come out a subgroup."""
    from .core import normal_factorise

    if not f.dom.group.is_subgroup(QCAT.kernel(f)):
        raise AssertionError("preimage of T0 under a quasi-hom is not a subgroup")
    return normal_factorise(QCAT, f, audit=True)


def ngp_instance() -> Ngp:
    return NGP


def functor_I(g: FinGroup) -> GroupPair:
    return GroupPair(g, frozenset(g.elements), frozenset({0}))


def functor_I_map(f: Arrow) -> Arrow:
    return Arrow(functor_I(f.dom), functor_I(f.cod), f.fn)


def functor_K(p: GroupPair) -> FinGroup:
    """S / (invariant closure of S₀ in S)."""
    return _k_data(p)[0]


def _k_data(p: GroupPair):
    sub, emb = p.group.restrict(p.top)
    pos = {x: i for i, x in enumerate(emb)}
    n = normal_closure(sub, [pos[x] for x in p.sub])
    q, proj = quotient_group(sub, n)
    return q, {x: proj[pos[x]] for x in emb}


def functor_K_map(f: Arrow) -> Arrow:
    qa, pa = _k_data(f.dom)
    qb, pb = _k_data(f.cod)
    fn = {}
    for s, c in pa.items():
        v = pb[f.fn[s]]
        if fn.setdefault(c, v) != v:
            raise CategoryError("K is not defined on this map")
    return Arrow(qa, qb, FrozenMap(fn))


FUNCTOR_I = Functor("I", GP, GP2, functor_I, functor_I_map)
FUNCTOR_K = Functor("K", GP2, GP, functor_K, functor_K_map)
FUNCTOR_P_GP2 = Functor("P", GP2, NGP, lambda a: a, lambda f: f)
FUNCTOR_P_SET2 = Functor("P", SET2, SETPT, functor_P_set2, functor_P_set2_map)
FUNCTOR_J = Functor("J", GP, NGP, functor_I, functor_I_map)


def functor_J(f: Arrow) -> Arrow:
    """J = P ∘ I on a group homomorphism."""
    return functor_I_map(f)


def hom_arrow(g: FinGroup, h: FinGroup, table) -> Arrow:
    fn = FrozenMap(enumerate(table)) if isinstance(table, (list, tuple)) else FrozenMap(table)
    from .finite import is_homomorphism

    if set(fn) != set(g.elements) or not is_homomorphism(g, h, fn):
        raise CategoryError("not a group homomorphism")
    return Arrow(g, h, fn)


def pair_map(dom: GroupPair, cod: GroupPair, table, kind: str = "Gp2") -> Arrow:
    """Build and validate a Gp₂ (kind='Gp2') or Q/Ngp (kind='Q') morphism."""
    fn = FrozenMap(zip(sorted(dom.top), table)) if isinstance(table, (list, tuple)) else FrozenMap(table)
    if set(fn) != dom.top or not set(fn.values()) <= cod.top:
        raise CategoryError("map table does not match the carriers")
    if not fn.image(dom.sub) <= cod.sub:
        raise CategoryError("map does not send S0 into T0")
    if kind == "Gp2":
        from .finite import is_homomorphism

        if not is_homomorphism(dom.group, cod.group, fn, dom.top):
            raise CategoryError("not a homomorphism")
    elif not is_quasi_hom(fn, dom, cod):
        raise CategoryError("not a quasi-homomorphism")
    return Arrow(dom, cod, fn)


# ---------------------------------------------------------------- Σ


def sigma_projection(p: GroupPair, n: Iterable[int]) -> Arrow:
    """The canonical projection (S, S₀) -> (S/N, S₀/N) for N normal in S, N ≤ S₀."""
    sub, emb = p.group.restrict(p.top)
    pos = {x: i for i, x in enumerate(emb)}
    nn = [pos[x] for x in n]
    q, proj = quotient_group(sub, nn)
    target = GroupPair(q, frozenset(q.elements), frozenset(proj[pos[x]] for x in p.sub))
    return Arrow(p, target, FrozenMap((x, proj[pos[x]]) for x in emb))


def is_sigma(p: Arrow) -> bool:
    """p surjective homomorphism with S₀ = p⁻¹(T₀)."""
    a, b = p.dom, p.cod
    from .finite import is_homomorphism

    return (
        is_homomorphism(a.group, b.group, p.fn, a.top)
        and set(p.fn.values()) == set(b.top)
        and p.fn.preimage(b.sub) == a.sub
    )


def sigma_invert(p: Arrow) -> Arrow:
    """A representative of the inverse of a Σ-map in Ngp: the least-representative section."""
    if not is_sigma(p):
        raise CategoryError("map is not in Σ")
    j = {}
    for s, t in p.fn.items_sorted():
        j.setdefault(t, s)
    out = Arrow(p.cod, p.dom, FrozenMap(j))
    if not is_quasi_hom(out.fn, out.dom, out.cod):
        raise AssertionError("section is not a quasi-homomorphism")
    return out
