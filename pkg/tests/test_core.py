import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from homolog.actions import ACT, FUNCTOR_U
from homolog.core import (
    Bounds,
    Category,
    CategoryError,
    check_ex0,
    check_ex1,
    check_ex2,
    check_ex3,
    check_functor_exactness,
    check_nsb_duality,
    identity_functor,
    is_exact_at,
    is_exact_morphism,
    is_N_epi,
    is_N_mono,
    is_normal_epi,
    is_normal_mono,
    is_order_two,
    is_short_exact,
    ker_morphism,
    normal_factorise,
)
from homolog.finite import cyclic, dihedral, homomorphisms, small_groups
from homolog.pairs import (
    FUNCTOR_I,
    FUNCTOR_K,
    GP,
    GP2,
    SET2,
    SETPT,
    Arrow,
    functor_I_map,
    hom_arrow,
    set_pair,
    set_pair_map,
)

from strategies import GP2_MAPS, SET2_MAPS

INSTANCES = [SET2, SETPT, GP2]


def test_set2_factorisation_by_hand():
    # ({0,1},{0}) -> ({0,1},{0,1}), the identity on points
    f = set_pair_map(set_pair(2, {0}), set_pair(2, {0, 1}), [0, 1])
    fact = normal_factorise(SET2, f, audit=True)
    assert fact.ker_label == frozenset({0, 1})
    assert fact.nim_label == frozenset({0, 1})
    assert SET2.is_null(f)


def test_identity_into_a_different_base_is_not_a_set2_map():
    with pytest.raises(CategoryError):
        set_pair_map(set_pair(2, {0}), set_pair(2, {1}), [0, 1])


@pytest.mark.parametrize("C", INSTANCES, ids=lambda C: C.name)
def test_identity_has_null_kernel_and_iso_centre(C):
    for a in C.objects(Bounds(3, 4)):
        fact = normal_factorise(C, C.identity(a), audit=True)
        assert C.is_null(C.identity(C.dom(fact.ker)))
        assert fact.ker_label == C.sub_bottom(a)
        assert C.is_iso(fact.g)


@pytest.mark.parametrize("C", INSTANCES, ids=lambda C: C.name)
def test_null_maps_have_full_kernel(C):
    objs = list(C.objects(Bounds(3, 4)))
    for a, b in itertools.product(objs, repeat=2):
        for f in C.homs(a, b):
            assert C.is_null(f) == (C.kernel(f) == C.sub_top(a))


@given(st.sampled_from(SET2_MAPS + GP2_MAPS))
def test_normal_factorisation_recomposes(f):
    C = SET2 if f in SET2_MAPS else GP2
    fact = normal_factorise(C, f, audit=True)
    assert C.same(C.compose(fact.nim, C.compose(fact.g, fact.ncm)), f)
    assert is_normal_mono(C, fact.ker) and is_normal_mono(C, fact.nim)
    assert is_normal_epi(C, fact.cok) and is_normal_epi(C, fact.ncm)
    assert C.kernel(fact.ncm) == C.kernel(f)
    assert C.normal_image(fact.nim) == C.normal_image(f)


@given(st.sampled_from(SET2_MAPS))
def test_set2_injective_covering_maps_are_exact(f):
    injective = len(set(f.fn.values())) == len(f.fn)
    if injective and f.cod.X0 <= set(f.fn.values()):
        assert is_exact_morphism(SET2, f)


def test_gp2_image_of_group_hom_is_exact_iff_injective():
    for g, h in itertools.product(small_groups(4), repeat=2):
        for fn in homomorphisms(g, h):
            f = functor_I_map(hom_arrow(g, h, fn))
            assert is_exact_morphism(GP2, f) == (len(set(fn.values())) == g.size)


@pytest.mark.parametrize("C", INSTANCES + [ACT], ids=lambda C: C.name)
def test_normal_monos_are_N_monos(C):
    for a in C.objects(Bounds(3, 4)):
        for x in C.nsb(a):
            m = C.subobject(a, x)
            assert is_normal_mono(C, m) and is_N_mono(C, m)
            p = C.quotient(a, x)
            assert is_normal_epi(C, p) and is_N_epi(C, p)


@pytest.mark.parametrize("C", [SET2, GP2], ids=lambda C: C.name)
def test_N_mono_matches_cancellation(C):
    objs = list(C.objects(Bounds(2, 3)))
    for a, b in itertools.product(objs, repeat=2):
        for f in C.homs(a, b):
            cancels = all(
                C.is_null(h) or not C.is_null(C.compose(f, h))
                for z in objs for h in C.homs(z, a)
            )
            assert is_N_mono(C, f) == cancels


def test_injective_set2_map_with_matching_preimage_is_N_mono_but_not_normal():
    f = set_pair_map(set_pair(1, ()), set_pair(2, {1}), [0])
    assert is_N_mono(SET2, f)
    assert not is_normal_mono(SET2, f)


@given(st.sampled_from(SET2_MAPS + GP2_MAPS))
def test_kernel_then_map_is_exact(f):
    C = SET2 if f in SET2_MAPS else GP2
    k = ker_morphism(C, f)
    assert is_order_two(C, k, f) and is_exact_at(C, k, f)


def test_set2_triple_is_short_exact():
    x = set_pair(4, {0})
    for a in ({0}, {0, 1}, {0, 1, 2}, {0, 1, 2, 3}):
        a = frozenset(a)
        assert is_short_exact(SET2, SET2.subobject(x, a), SET2.quotient(x, a))


def test_non_composable_pair_is_refused():
    f = SET2.identity(set_pair(2, ()))
    g = SET2.identity(set_pair(3, ()))
    with pytest.raises(CategoryError):
        is_exact_at(SET2, f, g)


def test_K_is_right_exact_but_not_left_exact():
    objs = list(GP2.objects(Bounds(1, 6)))
    assert check_functor_exactness(FUNCTOR_K, "right", objs).ok
    left = check_functor_exactness(FUNCTOR_K, "left", objs)
    assert not left.ok and left.counterexample


def test_identity_functor_and_U_are_exact():
    objs = list(SET2.objects(Bounds(3, 1)))
    for mode in ("N", "left", "right", "short", "long", "exact"):
        assert check_functor_exactness(identity_functor(SET2), mode, objs).ok
    assert check_functor_exactness(FUNCTOR_U, "exact", list(SETPT.objects(Bounds(4, 1)))).ok


def test_I_is_left_exact_on_groups():
    objs = [g for g in small_groups(4)]
    assert check_functor_exactness(FUNCTOR_I, "left", objs).ok


def test_unknown_exactness_mode():
    with pytest.raises(ValueError):
        check_functor_exactness(identity_functor(SET2), "sideways", [])


@pytest.mark.parametrize("C", [SET2, SETPT, GP2], ids=lambda C: C.name)
def test_small_fragments_pass_every_axiom(C):
    objs = list(C.objects(Bounds(3, 4)))
    for chk in (check_ex0, check_ex1, check_ex2, check_ex3, check_nsb_duality):
        rep = chk(C, objs)
        assert rep.ok, rep.counterexample
        assert rep.checked > 0


def test_act_is_homological_on_a_fragment():
    objs = list(ACT.objects(Bounds(3, 4)))
    assert check_ex2(ACT, objs).ok and check_ex3(ACT, objs).ok


def test_groups_are_semiexact_but_not_ex2():
    objs = [cyclic(2), dihedral(4)]
    assert check_ex0(GP, objs).ok and check_ex1(GP, objs).ok
    rep = check_ex2(GP, objs)
    assert not rep.ok and "not normal" in rep.counterexample


class Interval(Category):
    """The ordered set {lo..hi} as a category, with the strict arrows a < b as null maps.

    No identity is null, so the null maps cannot factor through a null object.
    """

    name = "interval"

    def __init__(self, lo: int, hi: int):
        self.points = range(lo, hi + 1)

    def compose(self, g, f):
        return Arrow(f.dom, g.cod, None)

    def identity(self, a):
        return Arrow(a, a, None)

    def is_null(self, f):
        return f.dom < f.cod

    def is_iso(self, f):
        return f.dom == f.cod

    def inverse(self, f):
        return f

    def kernel(self, f):
        return f.dom - 1

    def normal_image(self, f):
        return f.cod

    def subobject(self, a, x):
        return Arrow(x, a, None)

    def quotient(self, a, x):
        return Arrow(a, a, None)

    def lift(self, m, h):
        if h.dom > m.dom:
            raise CategoryError("no arrow")
        return Arrow(h.dom, m.dom, None)

    def descend(self, p, h):
        return h

    def nsb(self, a):
        return [x for x in self.points if x <= a]

    def sub_leq(self, a, x, y):
        return x <= y

    def objects(self, bounds):
        return list(self.points)

    def homs(self, a, b):
        if a <= b:
            yield Arrow(a, b, None)


def test_strict_order_ideal_is_not_closed():
    C = Interval(-2, 2)
    rep = check_ex0(C, C.objects(Bounds()))
    assert not rep.ok
    assert "null object" in rep.counterexample
