"""Exact couples, derived couples and the pages of their spectral sequences.

A couple is stored lazily: D, E, u, v and ∂ are functions of a position.
Ungraded couples use the single position ``()``; bigraded couples use
``(n, p)``.  The shifts ``su``, ``sv`` and ``sd`` are target minus source of
u, v and ∂, so a bigraded couple of type I has su = (0, 1), sv = (0, 0) and
sd = (-1, -1), and its r-th derivation has sv = (0, 1 - r).
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Mapping, Sequence

from .actions import (
    NAC,
    Action,
    act_map,
    functor_FI,
    functor_U,
    to_prime,
)
from .core import Category, CategoryError, Label, is_exact_at, is_exact_morphism
from .finite import (
    FinGroup,
    FrozenMap,
    cyclic,
    direct_product,
    elementary_abelian,
    homomorphisms,
    identity_map,
    quotient_group,
    trivial_group,
)
from .nsb import direct_image, inverse_image, is_left_modular_on, is_right_modular_on
from .pairs import GP, NGP, Arrow, GroupPair, PointedSet, cosets_in, hom_arrow
from .subquotient import Subquotient, regular_induction, subquotient

Pos = tuple


class CoupleError(CategoryError):
    pass


def _shift(x: Pos, s: Pos, k: int = 1) -> Pos:
    return tuple(a + k * b for a, b in zip(x, s))


@dataclass(eq=False)
class Couple:
    """(D, E, u, v, ∂) with u(x): D(x - su) -> D(x), v(e): D(e - sv) -> E(e), ∂(e): E(e) -> D(e + sd)."""

    category: Category
    D: Callable[[Pos], Any]
    E: Callable[[Pos], Any]
    u: Callable[[Pos], Any]
    v: Callable[[Pos], Any]
    d: Callable[[Pos], Any]
    su: Pos = ()
    sv: Pos = ()
    sd: Pos = ()
    window: tuple = ((),)
    horizon: int = 1
    quasi: bool = False
    name: str = "couple"
    support: Callable[[Pos], bool] | None = None
    sub_D: Callable[[Pos], Subquotient] | None = None
    sub_E: Callable[[Pos], Subquotient] | None = None
    parent: "Couple | None" = None
    order: int = 1

    def has_E(self, e: Pos) -> bool:
        return not self.quasi or e[0] >= 1

    def has_uexact(self, x: Pos) -> bool:
        """u into D(x) must be exact; quasi couples waive it on the row n = 0."""
        return not self.quasi or x[0] >= 1

    @functools.cached_property
    def _power_cache(self) -> dict:
        return {}

    def u_power(self, x: Pos, r: int):
        """u^r: D(x - r·su) -> D(x); u^0 is the identity."""
        key = (x, r)
        hit = self._power_cache.get(key)
        if hit is not None:
            return hit
        C = self.category
        if r == 0:
            out = C.identity(self.D(x))
        else:
            out = C.compose(self.u(x), self.u_power(_shift(x, self.su, -1), r - 1))
        self._power_cache[key] = out
        return out

    def u_power_from(self, y: Pos, r: int):
        """u^r out of D(y)."""
        return self.u_power(_shift(y, self.su, r), r)

    def differential(self, e: Pos):
        """d = v ∂ at e, landing in E(e + sd + sv)."""
        C = self.category
        return C.compose(self.v(_shift(e, _add(self.sd, self.sv))), self.d(e))


def _add(a: Pos, b: Pos) -> Pos:
    return tuple(x + y for x, y in zip(a, b))


# ---------------------------------------------------------------- audit


@dataclass
class CoupleReport:
    name: str
    failures: dict = field(default_factory=dict)
    checked: dict = field(default_factory=lambda: {"a": 0, "b": 0, "c": 0, "d": 0})
    u_exactness_positions: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, clause: str, why: str) -> None:
        self.failures.setdefault(clause, why)

    def summary(self) -> str:
        if self.ok:
            return f"{self.name}: exact couple ({self.checked})"
        return f"{self.name}: " + "; ".join(f"({k}) {v}" for k, v in sorted(self.failures.items()))


def check_exact_couple(c: Couple, window: Iterable[Pos] | None = None, horizon: int | None = None) -> CoupleReport:
    """Clauses (a) exact triangle or long sequences, (b) u^r exact, (c) v left modular on Ker u^r, (d) ∂ right modular on Nim u^r."""
    C = c.category
    rep = CoupleReport(c.name)
    horizon = c.horizon if horizon is None else horizon
    for y in c.window if window is None else window:
        e_in = _shift(y, c.sd, -1)
        e_out = _shift(y, c.sv)
        rep.checked["a"] += 1
        if c.has_E(e_in) and not is_exact_at(C, c.d(e_in), c.u(_shift(y, c.su))):
            rep.fail("a", f"nim ∂ != ker u at D{y}")
        if c.has_E(e_out) and not is_exact_at(C, c.u(y), c.v(e_out)):
            rep.fail("a", f"nim u != ker v at D{y}")
        if c.has_E(y) and not is_exact_at(C, c.v(y), c.d(y)):
            rep.fail("a", f"nim v != ker ∂ at E{y}")
        for r in range(1, horizon + 1):
            if c.has_uexact(y):
                rep.checked["b"] += 1
                rep.u_exactness_positions.append((y, r))
                if not is_exact_morphism(C, c.u_power(y, r)):
                    rep.fail("b", f"u^{r} into D{y} is not exact")
            if c.has_E(e_out):
                rep.checked["c"] += 1
                k = C.kernel(c.u_power_from(y, r))
                if not is_left_modular_on(C, c.v(e_out), k):
                    rep.fail("c", f"v{e_out} is not left modular on Ker u^{r} at D{y}")
            if c.has_E(y):
                rep.checked["d"] += 1
                n = C.normal_image(c.u_power(_shift(y, c.sd), r))
                if not is_right_modular_on(C, c.d(y), n):
                    rep.fail("d", f"∂{y} is not right modular on Nim u^{r}")
    return rep


def nilpotence_horizon(C: Category, u, cap: int = 64) -> int:
    """Least r after which Nim u^r and Ker u^r stop changing, for an endomorphism u."""
    p = u
    prev = (C.kernel(p), C.normal_image(p))
    for r in range(2, cap + 1):
        p = C.compose(u, p)
        cur = (C.kernel(p), C.normal_image(p))
        if cur == prev:
            return r - 1
        prev = cur
    raise CoupleError("u^r did not stabilise within the cap")


# ---------------------------------------------------------------- derivation


def _memo(fn):
    return functools.lru_cache(maxsize=None)(fn)


def derive_couple(c: Couple, audit: bool = True) -> Couple:
    """The derived couple: D′ = Nim u, E′ = ∂*(Nim u)/v*(Ker u), with u′, ∂′ induced and v′ = v̄′ i⁻¹."""
    if audit:
        rep = check_exact_couple(c)
        if not rep.ok:
            raise CoupleError(f"input is not an exact couple: {rep.summary()}")
    C = c.category
    su, sv, sd = c.su, c.sv, c.sd

    @_memo
    def sD(x):
        a = c.D(x)
        return subquotient(C, a, C.normal_image(c.u(x)), C.sub_bottom(a))

    @_memo
    def sE(e):
        a = c.E(e)
        num = inverse_image(C, c.d(e), C.normal_image(c.u(_shift(e, sd))))
        y = _shift(e, sv, -1)
        den = direct_image(C, c.v(e), C.kernel(c.u(_shift(y, su))))
        return subquotient(C, a, num, den)

    @_memo
    def u2(x):
        return regular_induction(C, c.u(x), sD(_shift(x, su, -1)), sD(x))

    @_memo
    def d2(e):
        return regular_induction(C, c.d(e), sE(e), sD(_shift(e, sd)))

    @_memo
    def v2(e):
        y = _shift(e, sv, -1)
        a = c.D(y)
        bar = subquotient(C, a, C.sub_top(a), C.kernel(c.u(_shift(y, su))))
        vbar = regular_induction(C, c.v(e), bar, sE(e))
        i = regular_induction(C, c.u(_shift(y, su)), bar, sD(_shift(y, su)))
        return C.compose(vbar, C.inverse(i))

    return Couple(
        C, lambda x: sD(x).obj, lambda e: sE(e).obj, u2, v2, d2,
        su, _add(sv, tuple(-s for s in su)), sd,
        window=c.window, horizon=max(1, c.horizon - 1), quasi=c.quasi,
        name=f"{c.name}'", support=c.support, sub_D=sD, sub_E=sE, parent=c, order=c.order + 1,
    )


def _direct(c: Couple, r: int) -> Couple:
    """The r-th derived couple computed in one step from c (r >= 1)."""
    C = c.category
    su, sv, sd = c.su, c.sv, c.sd

    @_memo
    def sD(x):
        a = c.D(x)
        return subquotient(C, a, C.normal_image(c.u_power(x, r - 1)), C.sub_bottom(a))

    @_memo
    def sE(e):
        a = c.E(e)
        num = inverse_image(C, c.d(e), C.normal_image(c.u_power(_shift(e, sd), r - 1)))
        y = _shift(e, sv, -1)
        den = direct_image(C, c.v(e), C.kernel(c.u_power_from(y, r - 1)))
        return subquotient(C, a, num, den)

    @_memo
    def u2(x):
        return regular_induction(C, c.u(x), sD(_shift(x, su, -1)), sD(x))

    @_memo
    def d2(e):
        return regular_induction(C, c.d(e), sE(e), sD(_shift(e, sd)))

    @_memo
    def v2(e):
        y = _shift(e, sv, -1)
        a = c.D(y)
        power = c.u_power_from(y, r - 1)
        low = subquotient(C, a, C.sub_top(a), C.kernel(power))
        vlow = regular_induction(C, c.v(e), low, sE(e))
        i = regular_induction(C, power, low, sD(_shift(y, su, r - 1)))
        return C.compose(vlow, C.inverse(i))

    return Couple(
        C, lambda x: sD(x).obj, lambda e: sE(e).obj, u2, v2, d2,
        su, _add(sv, tuple(-(r - 1) * s for s in su)), sd,
        window=c.window, horizon=max(1, c.horizon - r + 1), quasi=c.quasi,
        name=f"{c.name}^{r}", support=c.support, sub_D=sD, sub_E=sE, parent=c, order=c.order + r - 1,
    )


def iterate(c: Couple, r: int) -> Couple:
    """C^r: D^r = Nim u^{r-1}, E^r = ∂*(D^r)/v*(Ker u^{r-1}); C^1 is c itself."""
    if r < 1:
        raise ValueError("r must be at least 1")
    return c if r == 1 else _direct(c, r)


def pull_label(C: Category, s: Subquotient, x: Label) -> Label:
    """A normal subobject of the realised M/N, as a normal subobject of the ambient object."""
    return direct_image(C, s.m, inverse_image(C, s.h, x))


def _whole(C: Category, a) -> tuple:
    return C.sub_top(a), C.sub_bottom(a)


def structural_mismatches(c: Couple, r: int, window: Iterable[Pos] | None = None) -> list[str]:
    """Compare iterate(c, r + 1) with derive_couple(iterate(c, r)) through numerators and denominators."""
    C = c.category
    direct = _direct(c, r + 1)
    prev = _direct(c, r)
    twice = derive_couple(prev, audit=False)
    out = []
    for x in c.window if window is None else window:
        s_prev, s_new = prev.sub_D(x), twice.sub_D(x)
        got = pull_label(C, s_prev, s_new.num)
        if got != direct.sub_D(x).num:
            out.append(f"D{x}: {got!r} vs {direct.sub_D(x).num!r}")
        if not c.has_E(x):
            continue
        s_prev, s_new = prev.sub_E(x), twice.sub_E(x)
        got = (pull_label(C, s_prev, s_new.num), pull_label(C, s_prev, s_new.den))
        want = (direct.sub_E(x).num, direct.sub_E(x).den)
        if got != want:
            out.append(f"E{x}: {got!r} vs {want!r}")
    return out


# ---------------------------------------------------------------- pages


@dataclass
class SpectralPage:
    r: int
    entries: dict  # position -> Subquotient of E(position)
    differentials: dict  # position -> d^r out of that entry
    targets: dict  # position -> position of the target of d^r
    truncated: list = field(default_factory=list)

    def size(self, e: Pos) -> int:
        return _order(self.entries[e].obj)


def _order(obj) -> int:
    if isinstance(obj, GroupPair):
        return len(obj.top) // len(obj.sub)
    if isinstance(obj, FinGroup):
        return obj.size
    if isinstance(obj, Action):
        # homotopy pages count points: FI(G) has |G| of them, U(Z) has |Z|
        return len(obj.points)
    size = getattr(obj, "size", None)
    if size is None:
        raise TypeError(f"no size for {obj!r}")
    return size


def _needed(c: Couple, e: Pos, r: int) -> list[Pos]:
    """Positions of D and E that the page-r entry at e and its differentials read."""
    y = _shift(e, c.sv, -1)
    tgt = _shift(e, c.sd)
    pts = [e, y, _shift(y, c.su, r), tgt, _shift(tgt, c.su, -r)]
    return pts


def bigraded_pages(c: Couple, r_max: int, window: Iterable[Pos] | None = None, audit: bool = True) -> list[SpectralPage]:
    """Pages 1..r_max; d^r has bidegree sd + sv - (r - 1)·su, i.e. (-1, -r) for type I couples."""
    if audit:
        rep = check_exact_couple(c)
        if not rep.ok:
            raise CoupleError(f"input is not an exact couple: {rep.summary()}")
    window = list(c.window if window is None else window)
    pages = []
    for r in range(1, r_max + 1):
        cr = _direct(c, r)
        page = SpectralPage(r, {}, {}, {})
        for e in window:
            if not c.has_E(e):
                continue
            if c.support is not None:
                missing = [p for p in _needed(c, e, r) if not c.support(p)]
                if missing:
                    page.truncated.append((e, f"page {r} at {e} reads {missing[0]} outside the supplied window"))
                    continue
            page.entries[e] = cr.sub_E(e)
            t = _shift(e, _add(cr.sd, cr.sv))
            if c.has_E(t):
                page.differentials[e] = cr.differential(e)
                page.targets[e] = t
        if audit:
            _audit_page(c, cr, page)
        pages.append(page)
    if audit:
        for lo, hi in zip(pages, pages[1:]):
            _audit_homology(c, _direct(c, lo.r), lo, hi)
    return pages


def _audit_page(c: Couple, cr: Couple, page: SpectralPage) -> None:
    C = c.category
    for e, de in page.differentials.items():
        t = page.targets[e]
        if t in page.differentials and not C.is_null(C.compose(page.differentials[t], de)):
            raise CoupleError(f"d^{page.r} d^{page.r} is not null at {e}")
        s = page.entries[e]
        if not C.sub_leq(s.ambient, s.den, s.num):
            raise CoupleError(f"page {page.r} at {e} is not a subquotient")


def _audit_homology(c: Couple, cr: Couple, page: SpectralPage, nxt: SpectralPage) -> None:
    """E^{r+1} = ker d^r / nim d^r, read as numerator and denominator in E."""
    C = c.category
    incoming = {t: e for e, t in page.targets.items()}
    for e, s_next in nxt.entries.items():
        s = page.entries.get(e)
        if s is None:
            continue
        obj = s.obj
        k = C.kernel(page.differentials[e]) if e in page.differentials else C.sub_top(obj)
        src = incoming.get(e)
        if src is None:
            src = _shift(e, _add(cr.sd, cr.sv), -1)
            if not c.has_E(src):
                i = C.sub_bottom(obj)
            else:
                i = C.normal_image(cr.differential(src))
        else:
            i = C.normal_image(page.differentials[src])
        got = (pull_label(C, s, k), pull_label(C, s, i))
        if got != (s_next.num, s_next.den):
            raise CoupleError(f"E^{nxt.r} at {e} is not the homology of page {page.r}")


def page_orders(page: SpectralPage) -> dict:
    return {e: _order(s.obj) for e, s in page.entries.items()}


# ---------------------------------------------------------------- builders


def _arrow_or_zero(C: Category, src, tgt, given):
    if given is not None:
        return given
    z = C.zero_object()
    if src == z and tgt == z:
        return C.identity(z)
    if src == z:
        return C.from_zero(tgt)
    if tgt == z:
        return C.to_zero(src)
    raise CoupleError("a morphism between nonzero objects is missing")


def ungraded_couple(C: Category, D, E, u, v, d, name: str = "couple", horizon: int | None = None) -> Couple:
    """An exact couple given by concrete objects; the horizon is where u^r stabilises."""
    if horizon is None:
        horizon = nilpotence_horizon(C, u) + 1
    return Couple(C, lambda x: D, lambda x: E, lambda x: u, lambda x: v, lambda x: d,
                  window=((),), horizon=horizon, name=name)


def bigraded_couple(C: Category, D: Mapping, E: Mapping, u: Mapping, v: Mapping, d: Mapping,
                    window: Sequence[Pos] | None = None, horizon: int = 2, quasi: bool = False,
                    name: str = "bigraded", shifts: tuple = ((0, 1), (0, 0), (-1, -1))) -> Couple:
    """A bigraded couple from finite tables; missing entries are zero objects and null maps."""
    z = C.zero_object()
    su, sv, sd = (tuple(s) for s in shifts)

    def Dx(x):
        return D.get(x, z)

    def Ex(e):
        return E.get(e, z)

    def ux(x):
        return _arrow_or_zero(C, Dx(_shift(x, su, -1)), Dx(x), u.get(x))

    def vx(e):
        return _arrow_or_zero(C, Dx(_shift(e, sv, -1)), Ex(e), v.get(e))

    def dx(e):
        return _arrow_or_zero(C, Ex(e), Dx(_shift(e, sd)), d.get(e))

    keys = set(D) | set(E)
    return Couple(C, Dx, Ex, ux, vx, dx, su, sv, sd,
                  window=tuple(sorted(keys)) if window is None else tuple(window),
                  horizon=horizon, quasi=quasi, name=name, support=lambda p: p in keys)


@functools.lru_cache(maxsize=None)
def _endos(g: FinGroup) -> tuple:
    return tuple(homomorphisms(g, g))


@functools.lru_cache(maxsize=None)
def _autos(g: FinGroup) -> tuple:
    return tuple(f for f in _endos(g) if len(set(f.values())) == g.size)


def random_abelian_couple(rng: random.Random, max_order: int = 8) -> Couple:
    """An exact couple in finite abelian groups: E = coker u ⊕ ker u, twisted by an automorphism."""
    orders = [n for n in range(1, max_order + 1)]
    n = rng.choice(orders)
    if n in (4, 8) and rng.random() < 0.5:
        D = direct_product(cyclic(2), cyclic(n // 2))
    else:
        D = cyclic(n)
    u = Arrow(D, D, rng.choice(_endos(D)))
    C = GP
    K = C.kernel(u)
    Kg, kemb = D.restrict(K)
    Q, proj = quotient_group(D, C.normal_image(u))
    E = direct_product(Q, Kg)
    m = Kg.size
    if E.size <= 8:
        alpha = rng.choice(_autos(E))
    else:
        # enumerating all endomorphisms of E gets slow; twist each factor instead
        aq, ak = rng.choice(_autos(Q)), rng.choice(_autos(Kg))
        alpha = FrozenMap((q * m + k, aq[q] * m + ak[k]) for q in Q.elements for k in Kg.elements)
    beta = {val: k for k, val in alpha.items()}
    v = Arrow(D, E, FrozenMap((x, alpha[proj[x] * m]) for x in D.elements))
    d = Arrow(E, D, FrozenMap((e, kemb[beta[e] % m]) for e in E.elements))
    return ungraded_couple(C, D, E, u, v, d, name=f"ab[{D.name},u={list(u.fn.values())}]")


# ---------------------------------------------------------------- filtered complexes over F₂


@dataclass(frozen=True)
class FilteredComplex:
    """A chain complex of F₂-spaces C_0..C_N with a basis-adapted filtration.

    `levels[n][j]` is the filtration degree of the j-th basis vector of C_n and
    `diff[n][j]` is ∂ of that vector in C_{n-1}, as a bit mask (diff[0] is all 0).
    """

    levels: tuple
    diff: tuple

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(tuple(x) for x in self.levels))
        object.__setattr__(self, "diff", tuple(tuple(x) for x in self.diff))
        problem = complex_violation(self)
        if problem:
            raise CoupleError(problem)

    @property
    def top_degree(self) -> int:
        return len(self.levels) - 1

    @property
    def steps(self) -> int:
        return 1 + max((p for lv in self.levels for p in lv), default=0)

    def dim(self, n: int) -> int:
        return len(self.levels[n]) if 0 <= n <= self.top_degree else 0

    def apply(self, n: int, x: int) -> int:
        out = 0
        if 0 < n <= self.top_degree:
            for j, col in enumerate(self.diff[n]):
                if x >> j & 1:
                    out ^= col
        return out

    def filtered(self, n: int, p: int) -> frozenset:
        if not 0 <= n <= self.top_degree:
            return frozenset({0})
        allowed = sum(1 << j for j, lv in enumerate(self.levels[n]) if lv <= p)
        return frozenset(x for x in range(1 << self.dim(n)) if x & ~allowed == 0)


def complex_violation(fc: FilteredComplex) -> str | None:
    if len(fc.levels) != len(fc.diff):
        return "levels and differentials have different lengths"
    for n, (lv, cols) in enumerate(zip(fc.levels, fc.diff)):
        if len(lv) != len(cols):
            return f"degree {n}: one differential column per basis vector is needed"
        if any(p < 0 for p in lv):
            return "filtration degrees start at 0"
        below = len(fc.levels[n - 1]) if n > 0 else 0
        for j, col in enumerate(cols):
            if col >> below:
                return f"∂ of vector {j} in degree {n} leaves C_{n - 1}"
            if n > 0:
                for i in range(below):
                    if col >> i & 1 and fc.levels[n - 1][i] > lv[j]:
                        return f"∂ does not respect the filtration at degree {n}, vector {j}"
    for n in range(2, len(fc.levels)):
        for j in range(len(fc.levels[n])):
            if fc.apply(n - 1, fc.diff[n][j]):
                return f"∂∂ is not zero on vector {j} of degree {n}"
    return None


def complex_couple(fc: FilteredComplex) -> Couple:
    """The couple of the filtration in Ngp: D_np = (Z_n F_p, B_n F_p), E_np = (relative cycles, relative boundaries)."""
    groups = {n: elementary_abelian(fc.dim(n)) for n in range(fc.top_degree + 1)}
    triv = elementary_abelian(0)

    def G(n):
        return groups.get(n, triv)

    @_memo
    def cycles(n, p):
        return frozenset(x for x in fc.filtered(n, p) if fc.apply(n, x) == 0)

    @_memo
    def boundaries(n, p):
        return frozenset(fc.apply(n + 1, x) for x in fc.filtered(n + 1, p))

    @_memo
    def D(x):
        n, p = x
        return GroupPair(G(n), cycles(n, p), boundaries(n, p))

    @_memo
    def E(e):
        n, p = e
        low = fc.filtered(n - 1, p - 1)
        rel = frozenset(x for x in fc.filtered(n, p) if fc.apply(n, x) in low)
        lower = fc.filtered(n, p - 1)
        den = frozenset(a ^ b for a in boundaries(n, p) for b in lower)
        return GroupPair(G(n), rel, den)

    @_memo
    def u(x):
        n, p = x
        return Arrow(D((n, p - 1)), D(x), identity_map(cycles(n, p - 1)))

    @_memo
    def v(e):
        return Arrow(D(e), E(e), identity_map(D(e).top))

    @_memo
    def d(e):
        n, p = e
        src = E(e)
        return Arrow(src, D((n - 1, p - 1)), FrozenMap((x, fc.apply(n, x)) for x in sorted(src.top)))

    L = fc.steps
    window = tuple((n, p) for n in range(0, fc.top_degree + 1) for p in range(-1, L + 1))
    return Couple(NGP, D, E, u, v, d, (0, 1), (0, 0), (-1, -1), window=window, horizon=L + 1,
                  name=f"filtered{list(map(len, fc.levels))}")


def random_filtered_complex(rng: random.Random, total_dim: int = 6, steps: int = 3, max_degree: int = 2) -> FilteredComplex:
    """A random filtered F₂-complex: ∂ columns are drawn from the admissible cycles below each vector."""
    total = rng.randint(1, total_dim)
    top = rng.randint(0, max_degree)
    dims = [0] * (top + 1)
    for _ in range(total):
        dims[rng.randint(0, top)] += 1
    levels = [tuple(sorted(rng.randrange(steps) for _ in range(k))) for k in dims]
    diff = [tuple(0 for _ in levels[0])]
    for n in range(1, top + 1):
        below = levels[n - 1]
        cols = []
        for p in levels[n]:
            allowed = sum(1 << i for i, q in enumerate(below) if q <= p)
            cands = [x for x in range(1 << len(below)) if x & ~allowed == 0 and _apply_cols(diff[n - 1], x) == 0]
            cols.append(rng.choice(cands))
        diff.append(tuple(cols))
    return FilteredComplex(tuple(levels), tuple(diff))


def _apply_cols(cols, x: int) -> int:
    out = 0
    for j, col in enumerate(cols):
        if x >> j & 1:
            out ^= col
    return out


# ---------------------------------------------------------------- towers of fibrations


@dataclass(frozen=True)
class TowerLevel:
    """Homotopy data of one fibration f_s: X_s -> X_{s-1} with fibre F_s.

    Maps are tables (dicts) between element indices.  `f[0]` and `i[0]` are
    maps of pointed sets on π₀; `b[n]` is the boundary π_n X_{s-1} -> π_{n-1} F_s
    for n >= 2 (the boundary into π₀F_s is read off the fibre action).
    """

    pi_X: Mapping[int, FinGroup]
    pi0_X: int
    pi_F: Mapping[int, FinGroup]
    fibre_action: Action
    f: Mapping[int, Mapping]
    i: Mapping[int, Mapping]
    b: Mapping[int, Mapping] = field(default_factory=dict)


@dataclass(frozen=True)
class Tower:
    levels: tuple

    @property
    def height(self) -> int:
        return len(self.levels)

    def max_n(self) -> int:
        ns = [n for lv in self.levels for n in list(lv.pi_X) + list(lv.pi_F)]
        return max(ns, default=1)

    # lazy continuation: X_s = * for s < 0, and constant (identity maps, trivial fibres) above the top
    def group_X(self, s: int, n: int) -> FinGroup:
        if s < 0:
            return trivial_group()
        s = min(s, self.height - 1)
        return self.levels[s].pi_X.get(n, trivial_group())

    def points_X(self, s: int) -> PointedSet:
        if s < 0:
            return PointedSet({0})
        return PointedSet(range(self.levels[min(s, self.height - 1)].pi0_X))

    def group_F(self, s: int, n: int) -> FinGroup:
        if s < 0 or s >= self.height:
            return trivial_group()
        return self.levels[s].pi_F.get(n, trivial_group())

    def action_F(self, s: int) -> Action:
        if 0 <= s < self.height:
            return self.levels[s].fibre_action
        g = self.group_X(s - 1, 1)
        return Action(frozenset({0}), g, frozenset(g.elements), FrozenMap(((0, t), 0) for t in g.elements))

    def map_f(self, s: int, n: int) -> FrozenMap:
        src = self.group_X(s, n).elements if n else self.points_X(s).points
        if s >= self.height:
            return identity_map(src)
        if s < 0 or n not in self.levels[s].f:
            return FrozenMap((x, 0) for x in src)
        return FrozenMap(self.levels[s].f[n])

    def map_i(self, s: int, n: int) -> FrozenMap:
        src = self.group_F(s, n).elements if n else self.action_F(s).points
        if 0 <= s < self.height and n in self.levels[s].i:
            return FrozenMap(self.levels[s].i[n])
        return FrozenMap((x, 0) for x in src)

    def map_b(self, s: int, n: int) -> FrozenMap:
        src = self.group_X(s - 1, n).elements
        if 0 <= s < self.height and n in self.levels[s].b:
            return FrozenMap(self.levels[s].b[n])
        return FrozenMap((x, 0) for x in src)

    def path_connected(self) -> bool:
        return all(lv.pi0_X == 1 for lv in self.levels)


def group_tower(groups: Sequence[FinGroup], homs: Sequence[Mapping]) -> Tower:
    """The tower of classifying spaces of G_0 <- G_1 <- ... along homomorphisms homs[s]: G_s -> G_{s-1}.

    The fibre of BG_s -> BG_{s-1} has π₁ = ker and π₀ = the right cosets of the image.
    """
    levels = []
    for s, g in enumerate(groups):
        below = groups[s - 1] if s else trivial_group()
        phi = FrozenMap(homs[s]) if s else FrozenMap((x, 0) for x in g.elements)
        hom_arrow(g, below, phi)
        ker = phi.preimage({0})
        kg, emb = g.restrict(ker)
        img = frozenset(phi.values())
        cs = cosets_in(below, img, frozenset(below.elements))
        idx = {x: k for k, c in enumerate(cs) for x in c}
        rep = [min(c) for c in cs]
        act = FrozenMap(((k, t), idx[below.add(rep[k], t)]) for k in range(len(cs)) for t in below.elements)
        fibre = Action(frozenset(range(len(cs))), below, frozenset(below.elements), act)
        levels.append(TowerLevel(
            pi_X={1: g}, pi0_X=1, pi_F={1: kg}, fibre_action=fibre,
            f={1: dict(phi), 0: {0: 0}},
            i={1: dict(enumerate(emb)), 0: {k: 0 for k in range(len(cs))}},
        ))
    return Tower(tuple(levels))


def random_group_tower(rng: random.Random, groups: Sequence[FinGroup], height: int = 2) -> Tower:
    chosen = [rng.choice(groups) for _ in range(height)]
    homs = [None] + [rng.choice(list(homomorphisms(chosen[s], chosen[s - 1]))) for s in range(1, height)]
    return group_tower(chosen, homs)


def _fi(g: FinGroup) -> Action:
    return to_prime(functor_FI(g))


def _pt(z: PointedSet) -> Action:
    return to_prime(functor_U(z))


def tower_couple(tower: Tower, kind: str = "nac", audit: bool = True) -> Couple:
    """The homotopy couple of a tower: a quasi-exact couple in Nac, or an exact couple in Ngp.

    In Nac, D_np = π_n X_{-p-1} and E_np = π_{n-1} F_{-p}, with E_1p the action
    (π₀F_{-p}, π₁X_{-p-1}).  In Ngp (path-connected levels only) D_np = π_{n+1} X_{-p-1},
    E_np = π_n F_{-p} and E_0p = (π₁X_{-p-1}, image of π₁X_{-p}).
    """
    top_n = tower.max_n() + 1
    h = tower.height
    window = tuple((n, p) for n in range(0, top_n + 1) for p in range(-h - 1, 2))
    if kind == "nac":
        c = _nac_couple(tower, window)
    elif kind == "ngp":
        if not tower.path_connected():
            raise CoupleError("the Ngp couple needs path-connected levels")
        c = _ngp_couple(tower, window)
    else:
        raise ValueError("kind must be 'nac' or 'ngp'")
    if audit:
        rep = check_exact_couple(c)
        if not rep.ok:
            raise CoupleError(f"tower data do not form a {'quasi-' if c.quasi else ''}exact couple: {rep.summary()}")
    return c


def _typed(build, *args):
    try:
        return build(*args)
    except CategoryError as exc:
        raise CoupleError(f"supplied map fails typing: {exc}") from exc


def _nac_couple(t: Tower, window) -> Couple:
    @_memo
    def D(x):
        n, p = x
        if n < 0:
            return NAC.zero_object()
        if n == 0:
            return _pt(t.points_X(-p - 1))
        return _fi(t.group_X(-p - 1, n))

    @_memo
    def E(e):
        n, p = e
        if n < 1:
            return NAC.zero_object()
        if n == 1:
            return to_prime(t.action_F(-p))
        return _fi(t.group_F(-p, n - 1))

    @_memo
    def u(x):
        n, p = x
        a, b = D((n, p - 1)), D(x)
        if n < 0:
            return NAC.identity(a)
        fn = t.map_f(-p, n)
        fs = FrozenMap({0: 0}) if n == 0 else fn
        return _typed(act_map, a, b, fn, fs, True)

    @_memo
    def v(e):
        n, p = e
        a, b = D(e), E(e)
        if n == 1:
            orbit = FrozenMap((x, b.plus(0, x)) for x in sorted(a.points))
            return _typed(act_map, a, b, orbit, identity_map(a.top), True)
        fn = t.map_b(-p, n)
        return _typed(act_map, a, b, fn, fn, True)

    @_memo
    def d(e):
        n, p = e
        a, b = E(e), D((n - 1, p - 1))
        fn = t.map_i(-p, n - 1)
        if n == 1:
            return _typed(act_map, a, b, fn, FrozenMap((s, 0) for s in sorted(a.top)), True)
        return _typed(act_map, a, b, fn, fn, True)

    return Couple(NAC, D, E, u, v, d, (0, 1), (0, 0), (-1, -1), window=window,
                  horizon=t.height + 1, quasi=True, name=f"tower{t.height}/Nac")


def _ngp_couple(t: Tower, window) -> Couple:
    def pair(g: FinGroup) -> GroupPair:
        return GroupPair(g, frozenset(g.elements), frozenset({0}))

    def hom(a, b, fn):
        f = Arrow(a, b, FrozenMap(fn))
        if not set(f.fn) == a.top or not set(f.fn.values()) <= b.top:
            raise CoupleError("supplied map fails typing: carriers do not match")
        return f

    @_memo
    def D(x):
        n, p = x
        if n < 0:
            return NGP.zero_object()
        return pair(t.group_X(-p - 1, n + 1))

    @_memo
    def E(e):
        n, p = e
        if n < 0:
            return NGP.zero_object()
        if n == 0:
            g = t.group_X(-p - 1, 1)
            img = frozenset(t.map_f(-p, 1).values())
            return GroupPair(g, frozenset(g.elements), img)
        return pair(t.group_F(-p, n))

    @_memo
    def u(x):
        n, p = x
        if n < 0:
            return NGP.identity(D(x))
        return hom(D((n, p - 1)), D(x), t.map_f(-p, n + 1))

    @_memo
    def v(e):
        n, p = e
        if n < 0:
            return NGP.identity(D(e))
        if n == 0:
            return hom(D(e), E(e), identity_map(D(e).top))
        return hom(D(e), E(e), t.map_b(-p, n + 1))

    @_memo
    def d(e):
        n, p = e
        if n <= 0:
            return NGP.to_zero(E(e)) if n == 0 else NGP.identity(E(e))
        return hom(E(e), D((n - 1, p - 1)), t.map_i(-p, n))

    return Couple(NGP, D, E, u, v, d, (0, 1), (0, 0), (-1, -1), window=window,
                  horizon=t.height + 1, quasi=False, name=f"tower{t.height}/Ngp")
