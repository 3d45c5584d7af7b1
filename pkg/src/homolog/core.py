"""Category-generic layer: null ideals, kernels, cokernels, normal factorisation.

A concrete category implements :class:`Category`.  Normal subobjects are
represented by canonical, hashable labels chosen by the instance (a subset, a
subgroup, a lattice element, ...), so that ``nim f == ker g`` is a plain
equality test.  Normal quotients are named by their kernel label.
"""

from __future__ import annotations

import itertools
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Callable, Hashable, Iterable, Iterator, Sequence

Label = Hashable


class CategoryError(ValueError):
    pass


class Category(ABC):
    """Contract for a finite fragment of a semiexact category."""

    name: str = "?"

    # -- morphisms -------------------------------------------------------
    @abstractmethod
    def compose(self, g, f):
        """g ∘ f."""

    @abstractmethod
    def identity(self, a): ...

    @abstractmethod
    def is_null(self, f) -> bool: ...

    def same(self, f, g) -> bool:
        """Equality of parallel morphisms (overridden by quotient categories)."""
        return f == g

    @abstractmethod
    def is_iso(self, f) -> bool: ...

    @abstractmethod
    def inverse(self, f): ...

    def dom(self, f):
        return f.dom

    def cod(self, f):
        return f.cod

    # -- normal subobjects -------------------------------------------------
    @abstractmethod
    def kernel(self, f) -> Label:
        """Label of ker f in Nsb(dom f)."""

    @abstractmethod
    def normal_image(self, f) -> Label:
        """Label of nim f = ker cok f in Nsb(cod f)."""

    @abstractmethod
    def subobject(self, a, x: Label):
        """The normal mono with label x."""

    @abstractmethod
    def quotient(self, a, x: Label):
        """The normal epi whose kernel has label x."""

    @abstractmethod
    def lift(self, m, h):
        """The h' with m ∘ h' = h, for a normal mono m through which h factors."""

    @abstractmethod
    def descend(self, p, h):
        """The h' with h' ∘ p = h, for a normal epi p through which h factors."""

    @abstractmethod
    def nsb(self, a) -> list[Label]:
        """All normal subobject labels of a, in canonical order."""

    @abstractmethod
    def sub_leq(self, a, x: Label, y: Label) -> bool: ...

    def sub_bottom(self, a) -> Label:
        return self.kernel(self.identity(a))

    def sub_top(self, a) -> Label:
        return self.normal_image(self.identity(a))

    def sub_meet(self, a, x: Label, y: Label) -> Label:
        return _lattice_bound(self, a, x, y, upper=False)

    def sub_join(self, a, x: Label, y: Label) -> Label:
        return _lattice_bound(self, a, x, y, upper=True)

    # -- enumeration for audits ----------------------------------------------
    def objects(self, bounds: "Bounds") -> Iterator[Any]:
        raise NotImplementedError(f"{self.name} does not enumerate objects")

    def homs(self, a, b) -> Iterator[Any]:
        raise NotImplementedError(f"{self.name} does not enumerate morphisms")

    def zero_object(self):
        raise NotImplementedError(f"{self.name} has no zero object")

    def null_map(self, a, b):
        """A null morphism a -> b (through the zero object when there is one)."""
        return self.compose(self.from_zero(b), self.to_zero(a))

    def to_zero(self, a):
        raise NotImplementedError

    def from_zero(self, b):
        raise NotImplementedError

    def describe(self, x) -> str:
        return repr(x)


def _lattice_bound(C: Category, a, x, y, upper: bool) -> Label:
    labels = C.nsb(a)
    if upper:
        cands = [z for z in labels if C.sub_leq(a, x, z) and C.sub_leq(a, y, z)]
        best = [z for z in cands if all(C.sub_leq(a, z, w) for w in cands)]
    else:
        cands = [z for z in labels if C.sub_leq(a, z, x) and C.sub_leq(a, z, y)]
        best = [z for z in cands if all(C.sub_leq(a, w, z) for w in cands)]
    if not best:
        raise CategoryError("normal subobjects do not form a lattice here")
    return best[0]


@dataclass(frozen=True)
class Bounds:
    """Enumeration bounds for audits: max set size and max group order."""

    set_size: int = 4
    group_order: int = 8

    def as_tuple(self) -> tuple[int, int]:
        return (self.set_size, self.group_order)


DEFAULT_BOUNDS = Bounds()


# ---------------------------------------------------------------- factorisation


@dataclass(frozen=True)
class NormalFactorisation:
    """f = nim ∘ g ∘ ncm, with ker = ker f and cok = cok f."""

    ker: Any
    ncm: Any
    g: Any
    nim: Any
    cok: Any
    ker_label: Label = None
    nim_label: Label = None


def ker_morphism(C: Category, f):
    return C.subobject(C.dom(f), C.kernel(f))


def cok_morphism(C: Category, f):
    return C.quotient(C.cod(f), C.normal_image(f))


def normal_factorise(C: Category, f, audit: bool = False) -> NormalFactorisation:
    k = C.kernel(f)
    n = C.normal_image(f)
    ker = C.subobject(C.dom(f), k)
    ncm = C.quotient(C.dom(f), k)
    nim = C.subobject(C.cod(f), n)
    cok = C.quotient(C.cod(f), n)
    g = C.lift(nim, C.descend(ncm, f))
    fact = NormalFactorisation(ker, ncm, g, nim, cok, k, n)
    if audit:
        if not C.same(C.compose(nim, C.compose(g, ncm)), f):
            raise CategoryError("normal factorisation does not recompose to f")
        if not C.is_null(C.compose(f, ker)) or not C.is_null(C.compose(cok, f)):
            raise CategoryError("kernel or cokernel does not annihilate f")
    return fact


def central(C: Category, f):
    return normal_factorise(C, f).g


def is_exact_morphism(C: Category, f) -> bool:
    return C.is_iso(central(C, f))


def is_N_mono(C: Category, f) -> bool:
    return C.kernel(f) == C.sub_bottom(C.dom(f))


def is_N_epi(C: Category, f) -> bool:
    return C.normal_image(f) == C.sub_top(C.cod(f))


def is_normal_mono(C: Category, f) -> bool:
    return is_N_mono(C, f) and is_exact_morphism(C, f)


def is_normal_epi(C: Category, f) -> bool:
    return is_N_epi(C, f) and is_exact_morphism(C, f)


def _composable(C: Category, f, g):
    if C.cod(f) != C.dom(g):
        raise CategoryError("morphisms are not composable")


def is_order_two(C: Category, f, g) -> bool:
    _composable(C, f, g)
    return C.sub_leq(C.cod(f), C.normal_image(f), C.kernel(g))


def is_exact_at(C: Category, f, g) -> bool:
    _composable(C, f, g)
    return C.normal_image(f) == C.kernel(g)


def is_short_exact(C: Category, f, g) -> bool:
    _composable(C, f, g)
    return is_normal_mono(C, f) and is_normal_epi(C, g) and is_exact_at(C, f, g)


def null_through_zero_object(C: Category, f) -> bool:
    """A null f factors through the null object ker(1_cod)."""
    b = C.cod(f)
    m = C.subobject(b, C.sub_bottom(b))
    if not C.is_null(C.identity(C.dom(m))):
        return False
    try:
        h = C.lift(m, f)
    except CategoryError:
        return False
    return C.same(C.compose(m, h), f)


# ---------------------------------------------------------------- audits


@dataclass
class AuditReport:
    axiom: str
    status: str = "pass"
    counterexample: str | None = None
    checked: int = 0
    note: str = "bounded check: a pass is evidence on the enumerated fragment, not a proof"

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    def fail(self, witness: str) -> "AuditReport":
        if self.status == "pass":
            self.status = "fail"
            self.counterexample = witness
        return self

    def to_json(self) -> dict:
        d = {"axiom": self.axiom, "status": self.status, "checked": self.checked, "note": self.note}
        if self.counterexample is not None:
            d["counterexample"] = self.counterexample
        return d


def all_morphisms(C: Category, objects: Sequence) -> Iterator:
    for a in objects:
        for b in objects:
            yield from C.homs(a, b)


def check_ex0(C: Category, objects: Sequence, max_pairs: int | None = None) -> AuditReport:
    """The null ideal is closed under composition and every null map factors through a null object."""
    rep = AuditReport(f"{C.name}:ex0")
    homs = {(i, j): list(C.homs(a, b)) for i, a in enumerate(objects) for j, b in enumerate(objects)}
    n = len(objects)
    for (i, j), fs in homs.items():
        for f in fs:
            if C.is_null(f):
                rep.checked += 1
                if not null_through_zero_object(C, f):
                    return rep.fail(f"null {C.describe(f)} does not factor through a null object")
    count = 0
    for i, j, k in itertools.product(range(n), repeat=3):
        for f in homs[(i, j)]:
            nf = C.is_null(f)
            for g in homs[(j, k)]:
                if nf or C.is_null(g):
                    rep.checked += 1
                    count += 1
                    if not C.is_null(C.compose(g, f)):
                        return rep.fail(f"{C.describe(g)} ∘ {C.describe(f)} is not null")
                    if max_pairs is not None and count >= max_pairs:
                        return rep
    return rep


def check_ex1(C: Category, objects: Sequence) -> AuditReport:
    """Universal properties of kernels and cokernels against enumerated test maps."""
    rep = AuditReport(f"{C.name}:ex1")
    homs = {(i, j): list(C.homs(a, b)) for i, a in enumerate(objects) for j, b in enumerate(objects)}
    n = len(objects)
    for (i, j), fs in homs.items():
        for f in fs:
            k = ker_morphism(C, f)
            c = cok_morphism(C, f)
            if not C.is_null(C.compose(f, k)) or not C.is_null(C.compose(c, f)):
                return rep.fail(f"ker/cok of {C.describe(f)} does not annihilate it")
            for z in range(n):
                for a in homs[(z, i)]:
                    if C.is_null(C.compose(f, a)):
                        rep.checked += 1
                        try:
                            h = C.lift(k, a)
                        except CategoryError:
                            return rep.fail(f"{C.describe(a)} does not factor through ker {C.describe(f)}")
                        if not C.same(C.compose(k, h), a):
                            return rep.fail(f"bad factorisation through ker {C.describe(f)}")
                for b in homs[(j, z)]:
                    if C.is_null(C.compose(b, f)):
                        rep.checked += 1
                        try:
                            h = C.descend(c, b)
                        except CategoryError:
                            return rep.fail(f"{C.describe(b)} does not factor through cok {C.describe(f)}")
                        if not C.same(C.compose(h, c), b):
                            return rep.fail(f"bad factorisation through cok {C.describe(f)}")
    return rep


def check_ex2(C: Category, objects: Iterable) -> AuditReport:
    """Normal monos (resp. epis) are closed under composition."""
    rep = AuditReport(f"{C.name}:ex2")
    for a in objects:
        for x in C.nsb(a):
            m = C.subobject(a, x)
            inner = C.dom(m)
            for y in C.nsb(inner):
                rep.checked += 1
                mm = C.compose(m, C.subobject(inner, y))
                if not is_normal_mono(C, mm):
                    return rep.fail(f"composite of normal monos into {C.describe(a)} via {x!r}, {y!r} is not normal")
            p = C.quotient(a, x)
            outer = C.cod(p)
            for y in C.nsb(outer):
                rep.checked += 1
                pp = C.compose(C.quotient(outer, y), p)
                if not is_normal_epi(C, pp):
                    return rep.fail(f"composite of normal epis from {C.describe(a)} via {x!r}, {y!r} is not normal")
    return rep


def check_ex3(C: Category, objects: Iterable) -> AuditReport:
    """For m >= ker q, the composite q ∘ m is exact."""
    rep = AuditReport(f"{C.name}:ex3")
    for a in objects:
        labels = C.nsb(a)
        for big in labels:
            m = C.subobject(a, big)
            for small in labels:
                if C.sub_leq(a, small, big):
                    rep.checked += 1
                    if not is_exact_morphism(C, C.compose(C.quotient(a, small), m)):
                        return rep.fail(f"q∘m not exact on {C.describe(a)} for {big!r} >= {small!r}")
    return rep


def check_nsb_duality(C: Category, objects: Iterable) -> AuditReport:
    """ker/cok give mutually inverse bijections between normal subobjects and normal quotients."""
    rep = AuditReport(f"{C.name}:nsb-duality")
    for a in objects:
        for x in C.nsb(a):
            rep.checked += 1
            m = C.subobject(a, x)
            p = C.quotient(a, x)
            if C.normal_image(m) != x or C.kernel(p) != x:
                return rep.fail(f"label {x!r} on {C.describe(a)} is not recovered")
    return rep


# ---------------------------------------------------------------- functors


@dataclass
class Functor:
    name: str
    src: Category
    dst: Category
    on_obj: Callable
    on_mor: Callable

    def __call__(self, f):
        return self.on_mor(f)


EXACTNESS_MODES = ("N", "left", "right", "short", "long", "exact")


def check_functor_exactness(F: Functor, mode: str, objects: Sequence, morphisms: Sequence | None = None) -> AuditReport:
    """Check one preservation property of F over a bounded fragment."""
    if mode not in EXACTNESS_MODES:
        raise ValueError(f"unknown mode {mode!r}")
    S, T = F.src, F.dst
    rep = AuditReport(f"{F.name}:{mode}")
    if morphisms is None:
        morphisms = list(all_morphisms(S, objects))
    if mode == "exact":
        parts = [check_functor_exactness(F, m, objects, morphisms) for m in ("left", "right", "short", "long")]
        rep.checked = sum(p.checked for p in parts)
        left_right = parts[0].ok and parts[1].ok
        short_long = parts[2].ok and parts[3].ok
        if left_right != short_long:
            rep.note += "; exact ⇔ short ∧ long meta-check disagrees"
            return rep.fail("left∧right and short∧long disagree")
        for p in parts:
            if not p.ok:
                return rep.fail(f"{p.axiom}: {p.counterexample}")
        return rep
    if mode == "N":
        for f in morphisms:
            if S.is_null(f):
                rep.checked += 1
                if not T.is_null(F(f)):
                    return rep.fail(f"null {S.describe(f)} not preserved")
        return rep
    if mode == "left":
        for f in morphisms:
            rep.checked += 1
            fk = F(ker_morphism(S, f))
            if not (is_normal_mono(T, fk) and T.normal_image(fk) == T.kernel(F(f))):
                return rep.fail(f"kernel of {S.describe(f)} not preserved")
        return rep
    if mode == "right":
        for f in morphisms:
            rep.checked += 1
            fc = F(cok_morphism(S, f))
            if not (is_normal_epi(T, fc) and T.kernel(fc) == T.normal_image(F(f))):
                return rep.fail(f"cokernel of {S.describe(f)} not preserved")
        return rep
    if mode == "short":
        for a in objects:
            for x in S.nsb(a):
                rep.checked += 1
                m, p = S.subobject(a, x), S.quotient(a, x)
                if not is_short_exact(T, F(m), F(p)):
                    return rep.fail(f"short exact sequence at {x!r} on {S.describe(a)} not preserved")
        return rep
    # long: exact pairs go to exact pairs
    by_dom: dict = {}
    for g in morphisms:
        by_dom.setdefault(S.dom(g), []).append(g)
    for f in morphisms:
        for g in by_dom.get(S.cod(f), []):
            if is_exact_at(S, f, g):
                rep.checked += 1
                if not is_exact_at(T, F(f), F(g)):
                    return rep.fail(f"exactness of ({S.describe(f)}, {S.describe(g)}) not preserved")
    return rep


def identity_functor(C: Category) -> Functor:
    return Functor(f"1_{C.name}", C, C, lambda a: a, lambda f: f)
