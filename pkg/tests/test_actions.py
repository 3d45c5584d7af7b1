import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from homolog.actions import (
    ACT,
    ACT_PRIME,
    EMBED_ACT_PRIME,
    FUNCTOR_FI,
    FUNCTOR_P_ACT,
    FUNCTOR_U,
    FUNCTOR_V,
    NAC,
    Action,
    ActArrow,
    act_cokernel,
    act_factorise,
    act_kernel,
    act_map,
    action,
    action_violation,
    actprime_factorise,
    congruence,
    congruence_closed_form,
    counit,
    enumerate_actions,
    functor_F,
    functor_FI_map,
    functor_G,
    functor_U,
    functor_V,
    image_data,
    is_normal_subaction,
    is_transitive,
    mixed_sequence_exactness,
    nac_instance,
    nac_sigma_invert,
    sigma_projection_act,
    swap_action,
    to_prime,
)
from homolog.core import Bounds, CategoryError, check_functor_exactness, is_exact_at, is_exact_morphism
from homolog.finite import FrozenMap, cyclic, homomorphisms, identity_map, small_groups
from homolog.pairs import GroupPair, hom_arrow, pointed

from strategies import random_mixed_sequence

SMALL = list(ACT.objects(Bounds(3, 3)))
ACT_MAPS = [f for a in SMALL for b in SMALL for f in ACT.homs(a, b)]
Z4 = cyclic(4)


def test_action_axioms_are_checked():
    assert action_violation(swap_action()) is None
    with pytest.raises(CategoryError):
        action(range(2), cyclic(2), [[0, 0], [1, 0]])


def test_kernel_of_identity_and_zero():
    a = swap_action()
    k = act_kernel(ACT.identity(a))
    assert k.points == {0} and k.operators == a.fix() == {0, 1}
    z = ACT.to_zero(a)
    assert act_kernel(z).points == a.points


def test_swap_action_kernels_fix_the_base_point():
    a = swap_action()
    for b in SMALL:
        for f in ACT.homs(a, b):
            if f.fp.preimage({0}) == {0}:
                assert act_kernel(f).operators == frozenset({0, 1})


def test_normal_subsets_of_the_swap_action():
    a = swap_action()
    assert is_normal_subaction(a, {0, 1}) == (False, frozenset())
    assert is_normal_subaction(a, {0})[0]
    assert is_normal_subaction(a, a.points)[0]


@pytest.mark.parametrize("a", SMALL, ids=repr)
def test_orbit_of_the_base_point_is_normal(a):
    ok, ops = is_normal_subaction(a, a.orbit(0))
    assert ok and ops == a.top


@given(st.sampled_from(ACT_MAPS))
def test_explicit_factorisation_formulas(f):
    fact = act_factorise(f)
    y1, t1 = image_data(f)
    assert fact.nim_label == y1
    assert act_cokernel(f).cod.fix() == t1
    assert congruence(f.dom, fact.ker_label) == congruence_closed_form(f.dom, fact.ker_label)


def test_orbit_map_factorisation():
    # Z/2 acting on itself, sent onto the orbit of 0 in a 3-point action that moves 0
    S = cyclic(2)
    a = next(b for b in enumerate_actions(S, 3) if b.orbit(0) == {0, 1})
    fi = Action(frozenset(S.elements), S, frozenset(S.elements),
                FrozenMap(((x, s), S.add(x, s)) for x in S.elements for s in S.elements))
    f = act_map(fi, a, {s: a.plus(0, s) for s in S.elements}, {s: s for s in S.elements})
    fact = act_factorise(f)
    assert fact.ker_label == {0}
    assert fact.nim_label == a.orbit(0)
    assert is_exact_morphism(ACT, f)


def test_null_map_has_minimal_image():
    a = swap_action()
    z = ACT.null_map(a, a)
    fact = act_factorise(z)
    assert fact.ker_label == a.points and fact.nim_label == {0}


def test_V_and_U():
    assert functor_V(swap_action()).points == {0, 1}
    for n in range(1, 5):
        assert functor_V(functor_U(pointed(n))).points == pointed(n).points
    for a in SMALL:
        if is_transitive(a):
            assert len(functor_V(a).points) == 1


def test_U_is_exact_and_V_right_exact():
    assert check_functor_exactness(FUNCTOR_U, "exact", [pointed(n) for n in range(1, 4)]).ok
    objs = list(ACT.objects(Bounds(2, 2)))
    assert check_functor_exactness(FUNCTOR_V, "right", objs).ok


def test_V_does_not_preserve_this_kernel():
    triv = Action(frozenset({0, 1}), small_groups(1)[0], frozenset({0}), FrozenMap({(0, 0): 0, (1, 0): 1}))
    z2 = cyclic(2)
    swap = Action(frozenset({0, 1}), z2, frozenset({0, 1}), FrozenMap({(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 0}))
    f = ActArrow(triv, swap, identity_map({0, 1}), FrozenMap({0: 0}))
    assert act_kernel(f).points == {0}
    vf = FUNCTOR_V(f)
    assert vf.fn.preimage({0}) == vf.dom.points  # both orbits die in V
    assert not check_functor_exactness(FUNCTOR_V, "left", [triv, swap]).ok


def test_F_and_G():
    half = GroupPair(Z4, frozenset(range(4)), frozenset({0, 2}))
    fa = functor_F(half)
    assert fa.points == {0, 1}
    assert all(fa.plus(x, s) == fa.plus(x, (s + 2) % 4) for x in fa.points for s in range(4))
    assert functor_G(fa) == half
    assert functor_G(functor_U(pointed(3))) == GroupPair(small_groups(1)[0], frozenset({0}), frozenset({0}))


@pytest.mark.parametrize("a", [a for a in SMALL if is_transitive(a)], ids=repr)
def test_counit_is_an_isomorphism_on_transitive_actions(a):
    eps = counit(a)
    assert ACT.is_iso(eps)
    assert is_transitive(functor_F(functor_G(a)))


def test_group_sequences_are_exact_in_act_iff_classically():
    groups = small_groups(4)
    for H, G, K in itertools.product(groups, repeat=3):
        for fu in homomorphisms(H, G):
            for fv in homomorphisms(G, K):
                u, v = hom_arrow(H, G, fu), hom_arrow(G, K, fv)
                classical = set(fu.values()) == {x for x in G.elements if fv[x] == 0}
                assert is_exact_at(ACT, functor_FI_map(u), functor_FI_map(v)) == classical


# ---------------------------------------------------------------- mixed sequences


@given(st.randoms(use_true_random=False))
def test_mixed_sequences(rng):
    rep = mixed_sequence_exactness(*random_mixed_sequence(rng))
    assert rep.f_exact and rep.g_right_modular
    assert rep.consistent, rep.clauses


def test_orbit_injective_g_matches_the_classical_fibre():
    rng = random.Random(7)
    seen = 0
    for _ in range(200):
        u, v, a, g, y, h = random_mixed_sequence(rng)
        orbits = {min(a.orbit(x)) for x in a.points}
        if len({g[o] for o in orbits}) != len(orbits):
            continue
        rep = mixed_sequence_exactness(u, v, a, g, y, h)
        assert rep.clauses["c"]["stated"] == rep.classical_fibre
        seen += 1
    assert seen > 20


def test_identity_h_makes_d_a_statement_about_g():
    rng = random.Random(11)
    for _ in range(50):
        u, v, a, g, y, _ = random_mixed_sequence(rng)
        h = {p: p for p in y.points}
        rep = mixed_sequence_exactness(u, v, a, g, y, h)
        assert rep.clauses["d"]["stated"] == (set(g.values()) == {0})
        assert rep.clauses["d"]["exact"] == rep.clauses["d"]["stated"]


def test_mixed_sequence_shape_is_checked():
    u, v, a, g, y, h = random_mixed_sequence(random.Random(1))
    with pytest.raises(CategoryError):
        mixed_sequence_exactness(u, v, a, {**g, 0: 1} if len(y.points) > 1 else {x: 5 for x in g}, y, h)


# ---------------------------------------------------------------- Act′ and Nac


def test_prime_objects_carry_the_stabiliser():
    for a in SMALL:
        p = to_prime(a)
        assert p.sub == a.fix()
        assert action_violation(p) is None
    bad = swap_action().with_sub({0})
    assert action_violation(bad) is not None


@given(st.sampled_from(ACT_MAPS))
def test_embedding_agrees_with_act(f):
    g = EMBED_ACT_PRIME(f)
    a, b = act_factorise(f), actprime_factorise(g)
    assert (a.ker_label, a.nim_label) == (b.ker_label, b.nim_label)


def test_quasi_operator_map_in_act_prime():
    half = GroupPair(Z4, frozenset(range(4)), frozenset({0, 2}))
    x = to_prime(functor_F(half))
    f = act_map(x, x, {0: 0, 1: 1}, {s: (s + 2) % 4 for s in range(4)}, quasi=True)
    fact = actprime_factorise(f)
    assert fact.ker_label == {0}
    assert ACT_PRIME.is_iso(f) and ACT_PRIME.same(ACT_PRIME.compose(ACT_PRIME.inverse(f), f), ACT_PRIME.identity(x))
    assert ACT.is_iso(ACT.identity(functor_F(half)))
    z = ACT_PRIME.null_map(x, x)
    assert actprime_factorise(z).ker_label == x.points


def test_sigma_inverse_in_nac():
    half = GroupPair(Z4, frozenset(range(4)), frozenset({0, 2}))
    a = functor_F(half)  # two points, Z/4 acting through Z/2
    p = sigma_projection_act(a, {0, 2})
    j = nac_sigma_invert(p)
    assert dict(j.fs) == {0: 0, 1: 1}
    assert all(a.plus(x, j.fs[p.fs[s]]) == a.plus(x, s) for x in a.points for s in range(4))
    ident = sigma_projection_act(a, {0})
    assert NAC.same(nac_sigma_invert(ident), NAC.identity(to_prime(ident.cod)))
    with pytest.raises(CategoryError):
        sigma_projection_act(functor_F(GroupPair(Z4, frozenset(range(4)), frozenset({0}))), {0, 2})
    assert nac_instance() is NAC


def test_P_is_exact_on_act():
    objs = list(ACT.objects(Bounds(3, 2)))
    for mode in ("N", "left", "right", "short", "long", "exact"):
        assert check_functor_exactness(FUNCTOR_P_ACT, mode, objs).ok, mode


def test_group_maps_become_exact_in_nac():
    for g, h in itertools.product(small_groups(4), repeat=2):
        for fn in homomorphisms(g, h):
            f = FUNCTOR_FI(hom_arrow(g, h, fn))
            assert is_exact_morphism(NAC, FUNCTOR_P_ACT(f))
