"""Normal-subobject lattices and the transfer of normal subobjects along morphisms.

Every morphism f: A -> B of a semiexact category moves normal subobjects in
both directions, and the pair (f_*, f^*) is a connection Nsb A -> Nsb B.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .core import AuditReport, Category, CategoryError, Functor, Label, check_ex2, check_functor_exactness
from .finite import FinLattice
from .ltc import Connection, connection

_CACHE: dict = {}


def nsb_lattice(C: Category, a) -> FinLattice:
    """Nsb(a) as a lattice whose labels are the category's subobject labels."""
    try:
        key = (type(C), C.name, a)
        hit = _CACHE.get(key)
    except TypeError:
        key, hit = None, None
    if hit is not None:
        return hit
    labels = list(C.nsb(a))
    pos = {x: i for i, x in enumerate(labels)}
    leq = tuple(tuple(C.sub_leq(a, x, y) for y in labels) for x in labels)
    meet = tuple(tuple(pos[C.sub_meet(a, x, y)] for y in labels) for x in labels)
    join = tuple(tuple(pos[C.sub_join(a, x, y)] for y in labels) for x in labels)
    lat = FinLattice(leq, meet, join, tuple(labels))
    if key is not None:
        _CACHE[key] = lat
    return lat


def direct_image(C: Category, f, x: Label) -> Label:
    """f_*(x) = nim(f ∘ x)."""
    return C.normal_image(C.compose(f, C.subobject(C.dom(f), x)))


def inverse_image(C: Category, f, y: Label) -> Label:
    """f^*(y) = ker(cok(y) ∘ f)."""
    return C.kernel(C.compose(C.quotient(C.cod(f), y), f))


def nsb_connection(C: Category, f) -> Connection:
    X = nsb_lattice(C, C.dom(f))
    Y = nsb_lattice(C, C.cod(f))
    lower = [Y.index(direct_image(C, f, x)) for x in X.labels]
    upper = [X.index(inverse_image(C, f, y)) for y in Y.labels]
    return connection(X, Y, lower, upper)


def is_left_modular_on(C: Category, f, x: Label) -> bool:
    a = C.dom(f)
    k = inverse_image(C, f, C.sub_bottom(C.cod(f)))
    return inverse_image(C, f, direct_image(C, f, x)) == C.sub_join(a, x, k)


def is_right_modular_on(C: Category, f, y: Label) -> bool:
    b = C.cod(f)
    n = direct_image(C, f, C.sub_top(C.dom(f)))
    return direct_image(C, f, inverse_image(C, f, y)) == C.sub_meet(b, y, n)


def check_nsb_functoriality(C: Category, objects: Sequence) -> AuditReport:
    """nsb_connection(g ∘ f) = nsb_connection(g) ∘ nsb_connection(f) on the fragment."""
    from .ltc import compose

    rep = AuditReport(f"{C.name}:nsb-functor")
    homs = {(i, j): list(C.homs(a, b)) for i, a in enumerate(objects) for j, b in enumerate(objects)}
    n = len(objects)
    for i in range(n):
        for j in range(n):
            for f in homs[(i, j)]:
                nf = nsb_connection(C, f)
                for k in range(n):
                    for g in homs[(j, k)]:
                        rep.checked += 1
                        if nsb_connection(C, C.compose(g, f)) != compose(nsb_connection(C, g), nf):
                            return rep.fail(f"Nsb does not preserve {C.describe(g)} ∘ {C.describe(f)}")
    return rep


class PspCategory(Category):
    """The quotient of an ex2-category identifying maps with the same transfer connection."""

    def __init__(self, base: Category):
        self.base = base
        self.name = f"Psp{base.name}"

    def same(self, f, g):
        return nsb_connection(self.base, f) == nsb_connection(self.base, g)

    def compose(self, g, f):
        return self.base.compose(g, f)

    def identity(self, a):
        return self.base.identity(a)

    def is_null(self, f):
        return self.base.is_null(f)

    def is_iso(self, f):
        from .ltc import LTC

        return LTC.is_iso(nsb_connection(self.base, f)) and self._inverse_or_none(f) is not None

    def _inverse_or_none(self, f):
        ident_a = nsb_connection(self.base, self.base.identity(self.base.dom(f)))
        ident_b = nsb_connection(self.base, self.base.identity(self.base.cod(f)))
        for g in self.base.homs(self.base.cod(f), self.base.dom(f)):
            if (nsb_connection(self.base, self.base.compose(g, f)) == ident_a
                    and nsb_connection(self.base, self.base.compose(f, g)) == ident_b):
                return g
        return None

    def inverse(self, f):
        g = self._inverse_or_none(f)
        if g is None:
            raise CategoryError("not an isomorphism in the perspective quotient")
        return g

    def kernel(self, f):
        return self.base.kernel(f)

    def normal_image(self, f):
        return self.base.normal_image(f)

    def subobject(self, a, x):
        return self.base.subobject(a, x)

    def quotient(self, a, x):
        return self.base.quotient(a, x)

    def lift(self, m, h):
        return self.base.lift(m, h)

    def descend(self, p, h):
        return self.base.descend(p, h)

    def nsb(self, a):
        return self.base.nsb(a)

    def sub_leq(self, a, x, y):
        return self.base.sub_leq(a, x, y)

    def sub_meet(self, a, x, y):
        return self.base.sub_meet(a, x, y)

    def sub_join(self, a, x, y):
        return self.base.sub_join(a, x, y)

    def objects(self, bounds):
        return self.base.objects(bounds)

    def homs(self, a, b):
        """One representative per class."""
        seen = set()
        for f in self.base.homs(a, b):
            key = nsb_connection(self.base, f)
            if key not in seen:
                seen.add(key)
                yield f

    def describe(self, x):
        return self.base.describe(x)


def psp_quotient(C: Category, objects: Iterable) -> PspCategory:
    """Psp C; refuses unless C passes the ex2 audit on the given objects."""
    rep = check_ex2(C, list(objects))
    if not rep.ok:
        raise CategoryError(f"{C.name} is not ex2 on this fragment: {rep.counterexample}")
    return PspCategory(C)


def psp_classes(C: Category, a, b) -> list[list]:
    """Parallel maps a -> b grouped by their transfer connection."""
    groups: dict = {}
    for f in C.homs(a, b):
        groups.setdefault(nsb_connection(C, f), []).append(f)
    return list(groups.values())


def nsb_transfer_map(F: Functor, a) -> list[tuple[Label, Label]]:
    """The map Nsb(a) -> Nsb(F a), x -> label of F(subobject x)."""
    S, T = F.src, F.dst
    return [(x, T.normal_image(F(S.subobject(a, x)))) for x in S.nsb(a)]


def _require_exact(F: Functor, objects: Sequence, morphisms) -> None:
    rep = check_functor_exactness(F, "exact", objects, morphisms)
    if not rep.ok:
        raise CategoryError(f"{F.name} is not exact: {rep.counterexample}")


def is_nsb_faithful(F: Functor, objects: Sequence, morphisms=None, audit: bool = True) -> bool:
    if audit:
        _require_exact(F, objects, morphisms)
    for a in objects:
        images = [y for _, y in nsb_transfer_map(F, a)]
        if len(set(images)) != len(images):
            return False
    return True


def is_nsb_full(F: Functor, objects: Sequence, morphisms=None, audit: bool = True) -> bool:
    if audit:
        _require_exact(F, objects, morphisms)
    for a in objects:
        images = {y for _, y in nsb_transfer_map(F, a)}
        if images != set(F.dst.nsb(F.on_obj(a))):
            return False
    return True


def nsb_functor(C: Category) -> Functor:
    """The perspective functor C -> Ltc."""
    from .ltc import LTC

    return Functor(f"Nsb_{C.name}", C, LTC, lambda a: nsb_lattice(C, a), lambda f: nsb_connection(C, f))
