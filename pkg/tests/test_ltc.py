import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from homolog.core import Bounds, check_ex2, check_ex3, is_exact_morphism, is_normal_epi, is_normal_mono, is_short_exact
from homolog.finite import LatticeError, boolean_lattice, chain, diamond, is_modular_lattice, pentagon
from homolog.ltc import (
    LTC,
    biproduct,
    compose,
    connection,
    connection_leq,
    connection_sum,
    connection_violation,
    connections,
    element_sequence,
    from_lower,
    identity,
    is_exact_connection,
    is_modular_connection,
    ltc_factorise,
    opposite,
    reverse,
    zero,
)

LATTICES = list(LTC.objects(Bounds(4, 1)))
ALL = [f for x in LATTICES for y in LATTICES for f in connections(x, y)]
MODULAR = [x for x in LATTICES if is_modular_lattice(x)]

connections_st = st.sampled_from(ALL)


def composable_pairs():
    by_dom = {}
    for g in ALL:
        by_dom.setdefault(id(g.dom), []).append(g)
    return [(f, g) for f in ALL for g in by_dom.get(id(f.cod), [])]


@given(connections_st)
def test_every_enumerated_connection_is_a_galois_connection(f):
    assert connection_violation(f) is None
    X, Y = f.dom, f.cod
    assert all(X.leq[x][f.upper[f.lower[x]]] for x in X.elements)
    assert all(Y.leq[f.lower[f.upper[y]]][y] for y in Y.elements)
    assert all(f.lower[f.upper[f.lower[x]]] == f.lower[x] for x in X.elements)
    # the upper adjoint is determined by the lower one
    assert from_lower(X, Y, f.lower) == f


@given(connections_st)
def test_units_and_zero(f):
    assert compose(f, identity(f.dom)) == f
    assert compose(identity(f.cod), f) == f
    z = zero(f.cod, f.cod)
    assert compose(z, f) == zero(f.dom, f.cod)
    assert all(v == f.dom.top for v in zero(f.dom, f.cod).upper)


def test_composites_of_chain_connections_stay_adjoint():
    c3 = chain(3)
    fs = list(connections(c3, c3))
    for f, g in itertools.product(fs, repeat=2):
        assert connection_violation(compose(g, f)) is None


def test_bad_adjoint_pair_is_rejected():
    c2 = chain(2)
    with pytest.raises(Exception):
        connection(c2, c2, (0, 1), (0, 0))


@given(connections_st)
def test_factorisation_is_down_set_and_up_set(f):
    fact = ltc_factorise(f)
    assert fact.ker_label == f.upper[f.cod.bottom]
    assert fact.nim_label == f.lower[f.dom.top]
    assert fact.ker.dom.size == len(f.dom.down(fact.ker_label))
    assert fact.cok.cod.size == len(f.cod.up(fact.nim_label))


def test_zero_and_identity_factorisations():
    x, y = chain(3), diamond()
    fact = ltc_factorise(zero(x, y))
    assert fact.ker_label == x.top and fact.nim_label == y.bottom
    fact = ltc_factorise(identity(y))
    assert fact.ker.dom.size == 1 and fact.cok.cod.size == 1


def test_three_chain_kernel_against_brute_force():
    c3 = chain(3)
    for f in connections(c3, c3):
        if f.lower[1] != 2:
            continue
        # the largest element killed by f
        killed = [x for x in c3.elements if f.lower[x] == c3.bottom]
        assert LTC.kernel(f) == max(killed)


@given(connections_st)
def test_exactness_formula_matches_the_central_map(f):
    assert is_exact_connection(f) == is_exact_morphism(LTC, f)


def test_identity_and_element_sequences_are_exact():
    for x in LATTICES:
        assert is_exact_connection(identity(x))
        if is_modular_lattice(x):
            assert is_modular_connection(identity(x))
        for a in x.elements:
            m, p = element_sequence(x, a)
            assert is_exact_connection(m) and is_exact_connection(p)
            assert is_short_exact(LTC, m, p)


def test_a_two_chain_inclusion_into_the_pentagon_is_not_exact():
    n5 = pentagon()
    witnesses = [
        f for f in connections(chain(2), n5)
        if len(set(f.lower)) == 2 and not is_exact_connection(f)
    ]
    assert witnesses
    with pytest.raises(LatticeError):
        is_modular_connection(witnesses[0])


def test_modular_connections_compose():
    fs = [f for f in ALL if f.dom in MODULAR and f.cod in MODULAR and is_modular_connection(f)]
    for f, g in itertools.product(fs, repeat=2):
        if g.dom == f.cod:
            assert is_modular_connection(compose(g, f))


def test_short_exact_sequences_come_from_elements():
    for x in LATTICES:
        monos = [m for a in LATTICES for m in connections(a, x) if is_normal_mono(LTC, m)]
        epis = [p for b in LATTICES for p in connections(x, b) if is_normal_epi(LTC, p)]
        for m, p in itertools.product(monos, epis):
            if is_short_exact(LTC, m, p):
                sub, quo = element_sequence(x, LTC.normal_image(m))
                assert LTC.is_iso(LTC.lift(sub, m))
                assert LTC.is_iso(LTC.descend(quo, p))


def test_biproduct_of_two_chains_is_boolean():
    c2 = chain(2)
    bp = biproduct(c2, c2)
    assert bp.lattice.size == 4 and is_modular_lattice(bp.lattice)
    assert bp.lattice.leq == boolean_lattice(2).leq
    # (a, b) has index 2a + b
    assert bp.i.lower == (0, 2) and bp.j.lower == (0, 1)
    assert bp.p.lower == (0, 0, 1, 1) and bp.q.lower == (0, 1, 0, 1)
    assert bp.p.upper == (1, 3) and bp.q.upper == (2, 3)


@pytest.mark.parametrize("x,y", [(chain(2), chain(3)), (chain(3), diamond()), (pentagon(), chain(2))])
def test_biproduct_equations(x, y):
    bp = biproduct(x, y)
    assert compose(bp.p, bp.i) == identity(x)
    assert compose(bp.q, bp.j) == identity(y)
    assert compose(bp.q, bp.i) == zero(x, y)
    assert compose(bp.p, bp.j) == zero(y, x)
    assert connection_sum(compose(bp.i, bp.p), compose(bp.j, bp.q)) == identity(bp.lattice)
    assert ltc_factorise(bp.i).ker.dom.size == 1
    assert LTC.kernel(bp.p) == LTC.normal_image(bp.j)


def test_biproduct_with_a_point():
    x = diamond()
    bp = biproduct(x, chain(1))
    assert bp.lattice.size == x.size and LTC.is_iso(bp.i)


def test_biproduct_universal_properties():
    x, y = chain(2), chain(3)
    bp = biproduct(x, y)
    for z in [chain(1), chain(2), chain(3), boolean_lattice(2)]:
        for f in connections(z, x):
            for g in connections(z, y):
                into = [h for h in connections(z, bp.lattice)
                        if compose(bp.p, h) == f and compose(bp.q, h) == g]
                assert len(into) == 1
        for f in connections(x, z):
            for g in connections(y, z):
                out = [k for k in connections(bp.lattice, z)
                       if compose(k, bp.i) == f and compose(k, bp.j) == g]
                assert len(out) == 1


@given(connections_st)
def test_sum_is_idempotent_with_zero_as_unit(f):
    assert connection_sum(f, f) == f
    assert connection_sum(f, zero(f.dom, f.cod)) == f


def test_sum_is_an_upper_bound_for_every_parallel_pair():
    for x in LATTICES:
        for y in LATTICES:
            fs = list(connections(x, y))
            for f, g in itertools.product(fs, repeat=2):
                s = connection_sum(f, g)
                assert connection_violation(s) is None
                assert connection_leq(f, s) and connection_leq(g, s)


@given(connections_st)
def test_reversal_is_an_involution(f):
    r = reverse(f)
    assert r.dom == opposite(f.cod) and r.cod == opposite(f.dom)
    assert reverse(r) == f


def test_reversal_reverses_composition():
    for f, g in composable_pairs()[:3000]:
        assert reverse(compose(g, f)) == compose(reverse(f), reverse(g))


def test_ltc_is_homological():
    assert check_ex2(LTC, LATTICES).ok
    assert check_ex3(LTC, LATTICES).ok
