"""Subquotients M/N, regular induction and the factorisation of induced maps.

A subquotient of A is recorded by its bicartesian square

        m
    M ----> A
  h |       | q
    v       v
    S ----> A/N
        k

where S is realised as the quotient of M by the pullback of N.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

from .core import AuditReport, Category, CategoryError, Label, is_exact_morphism, is_normal_mono
from .nsb import direct_image as _dir
from .nsb import inverse_image as _inv


@dataclass(frozen=True)
class Subquotient:
    ambient: Any
    num: Label
    den: Label
    obj: Any
    m: Any  # M -> A
    q: Any  # A -> A/N
    h: Any  # M -> S
    k: Any  # S -> A/N


def subquotient(C: Category, a, num: Label, den: Label, audit: bool = False) -> Subquotient:
    if not C.sub_leq(a, den, num):
        raise CategoryError(f"denominator {den!r} is not below numerator {num!r}")
    m = C.subobject(a, num)
    q = C.quotient(a, den)
    h = C.quotient(C.dom(m), _inv(C, m, den))
    k = C.descend(h, C.compose(q, m))
    s = Subquotient(a, num, den, C.cod(h), m, q, h, k)
    if audit:
        if not is_exact_morphism(C, C.compose(q, m)):
            raise CategoryError("q∘m is not exact: the category fails ex3 here")
        if not is_normal_mono(C, k):
            raise CategoryError("the realised subquotient does not embed in A/N")
        if not C.same(C.compose(k, h), C.compose(q, m)):
            raise CategoryError("subquotient square does not commute")
    return s


def whole(C: Category, a) -> Subquotient:
    """A as the subquotient A/0."""
    return subquotient(C, a, C.sub_top(a), C.sub_bottom(a))


def audit_bicartesian(C: Category, s: Subquotient, objects: Sequence) -> AuditReport:
    """Check that the square of s is a pullback and a pushout against maps from/to the given objects."""
    rep = AuditReport(f"{C.name}:bicartesian")
    M, A, S, Q = C.dom(s.m), s.ambient, s.obj, C.cod(s.q)
    for z in objects:
        za = list(C.homs(z, A))
        zs = list(C.homs(z, S))
        zm = list(C.homs(z, M))
        for a in za:
            qa = C.compose(s.q, a)
            for b in zs:
                if not C.same(qa, C.compose(s.k, b)):
                    continue
                rep.checked += 1
                hits = [c for c in zm if C.same(C.compose(s.m, c), a) and C.same(C.compose(s.h, c), b)]
                if len(hits) != 1:
                    return rep.fail(f"pullback cone from {C.describe(z)} has {len(hits)} mediating maps")
        az = list(C.homs(A, z))
        sz = list(C.homs(S, z))
        qz = list(C.homs(Q, z))
        for a in az:
            am = C.compose(a, s.m)
            for b in sz:
                if not C.same(am, C.compose(b, s.h)):
                    continue
                rep.checked += 1
                hits = [c for c in qz if C.same(C.compose(c, s.q), a) and C.same(C.compose(c, s.k), b)]
                if len(hits) != 1:
                    return rep.fail(f"pushout cocone to {C.describe(z)} has {len(hits)} mediating maps")
    return rep


class InductionError(CategoryError):
    pass


def check_induction(C: Category, f, s: Subquotient, t: Subquotient) -> None:
    """Refuse unless f_*(M) <= H and f_*(N) <= K."""
    b = C.cod(f)
    if C.dom(f) != s.ambient or b != t.ambient:
        raise InductionError("subquotients do not sit over the ends of f")
    if not C.sub_leq(b, _dir(C, f, s.num), t.num):
        raise InductionError("f_*(M) <= H fails")
    if not C.sub_leq(b, _dir(C, f, s.den), t.den):
        raise InductionError("f_*(N) <= K fails")


def regular_induction(C: Category, f, s: Subquotient, t: Subquotient, audit: bool = False):
    """The unique g: M/N -> H/K with g∘h_s = h_t∘(f restricted to M)."""
    check_induction(C, f, s, t)
    fm = C.lift(t.m, C.compose(f, s.m))
    g = C.descend(s.h, C.compose(t.h, fm))
    if audit:
        if not C.same(C.compose(t.k, g), C.compose(C.descend(s.q, C.compose(t.q, f)), s.k)):
            raise CategoryError("induced map does not close the cube")
        target = C.compose(t.h, fm)
        hits = [x for x in C.homs(s.obj, t.obj) if C.same(C.compose(x, s.h), target)]
        if len(hits) != 1 or not C.same(hits[0], g):
            raise CategoryError(f"induced map is not unique ({len(hits)} candidates)")
    return g


def canonical(C: Category, s: Subquotient, t: Subquotient):
    """The map M/N -> M'/N' induced by the identity, for M <= M', N <= N'."""
    return regular_induction(C, C.identity(s.ambient), s, t)


def induced_images(C: Category, f, s: Subquotient, t: Subquotient, x: Label, direction: str = "direct") -> Label:
    """g_*(x) (direction "direct") or g^*(y) ("inverse") along the induced g, four ways.

    The four composites pass through the two squares by different routes;
    they must agree, and so must the transfer along g itself.
    """
    check_induction(C, f, s, t)
    m, q, qp, mp = s.m, s.q, s.h, s.k
    h, v, vp, hp = t.m, t.q, t.h, t.k
    if direction == "direct":
        up = _dir(C, m, _inv(C, qp, x))
        down = _inv(C, q, _dir(C, mp, x))
        values = [
            _dir(C, vp, _inv(C, h, _dir(C, f, up))),
            _dir(C, vp, _inv(C, h, _dir(C, f, down))),
            _inv(C, hp, _dir(C, v, _dir(C, f, up))),
            _inv(C, hp, _dir(C, v, _dir(C, f, down))),
        ]
        direct = _dir(C, regular_induction(C, f, s, t), x)
    elif direction == "inverse":
        up = _dir(C, h, _inv(C, vp, x))
        down = _inv(C, v, _dir(C, hp, x))
        values = [
            _dir(C, qp, _inv(C, m, _inv(C, f, up))),
            _dir(C, qp, _inv(C, m, _inv(C, f, down))),
            _inv(C, mp, _dir(C, q, _inv(C, f, up))),
            _inv(C, mp, _dir(C, q, _inv(C, f, down))),
        ]
        direct = _inv(C, regular_induction(C, f, s, t), x)
    else:
        raise ValueError("direction must be 'direct' or 'inverse'")
    if any(v != values[0] for v in values) or direct != values[0]:
        raise CategoryError(f"image formulas disagree: {values} vs {direct!r}")
    return values[0]


@dataclass(frozen=True)
class InducedFactorisation:
    kernel: Subquotient  # (M ∧ f^*K)/N
    coimage: Subquotient  # M/(M ∧ f^*K)
    image: Subquotient  # (K ∨ f_*M)/K
    cokernel: Subquotient  # H/(K ∨ f_*M)
    ker: Any
    ncm: Any
    middle: Any
    nim: Any
    cok: Any


def induced_factorisation(C: Category, f, s: Subquotient, t: Subquotient, audit: bool = True) -> InducedFactorisation:
    check_induction(C, f, s, t)
    A, B = s.ambient, t.ambient
    lo = C.sub_meet(A, s.num, _inv(C, f, t.den))
    hi = C.sub_join(B, t.den, _dir(C, f, s.num))
    ks = subquotient(C, A, lo, s.den)
    cs = subquotient(C, A, s.num, lo)
    ims = subquotient(C, B, hi, t.den)
    cks = subquotient(C, B, t.num, hi)
    ker = canonical(C, ks, s)
    ncm = canonical(C, s, cs)
    nim = canonical(C, ims, t)
    cok = canonical(C, t, cks)
    middle = regular_induction(C, f, cs, ims)
    out = InducedFactorisation(ks, cs, ims, cks, ker, ncm, middle, nim, cok)
    if audit:
        g = regular_induction(C, f, s, t)
        checks = {
            "kernel": (C.normal_image(ker), C.kernel(g)),
            "normal image": (C.normal_image(nim), C.normal_image(g)),
            "coimage": (C.kernel(ncm), C.kernel(g)),
            "cokernel": (C.kernel(cok), C.normal_image(g)),
        }
        for what, (got, want) in checks.items():
            if got != want:
                raise CategoryError(f"{what} of the induced map disagrees: {got!r} vs {want!r}")
        if not (is_normal_mono(C, ker) and is_normal_mono(C, nim)):
            raise CategoryError("canonical kernel/image maps are not normal monos")
        if C.is_iso(middle) != is_exact_morphism(C, g):
            raise CategoryError("middle map is an isomorphism exactly when g is exact, and that fails here")
        if not C.same(C.compose(nim, C.compose(middle, ncm)), g):
            raise CategoryError("induced factorisation does not recompose to g")
    return out
