import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from homolog.core import CategoryError, is_exact_morphism
from homolog.couples import (
    CoupleError,
    FilteredComplex,
    bigraded_couple,
    bigraded_pages,
    check_exact_couple,
    complex_couple,
    derive_couple,
    group_tower,
    iterate,
    page_orders,
    random_abelian_couple,
    random_filtered_complex,
    random_group_tower,
    structural_mismatches,
    tower_couple,
    ungraded_couple,
)
from homolog.finite import FrozenMap, cyclic, homomorphisms, small_groups, trivial_group
from homolog.pairs import GP, NGP, Arrow

from oracles import graded_homology

Z2, Z4 = cyclic(2), cyclic(4)
MOD2 = next(h for h in homomorphisms(Z4, Z2) if len(set(h.values())) == 2)

# C_0 = <a> at level 0, C_1 = <b> at level 1 with ∂b = a: homology dies on page 2
KILL = FilteredComplex(((0,), (1,)), ((0,), (1,)))


def z4_tower():
    return group_tower([Z2, Z4], [None, MOD2])


def test_complex_couple_is_exact_and_derives():
    c = complex_couple(KILL)
    assert check_exact_couple(c).ok
    d = derive_couple(c)
    assert check_exact_couple(d).ok


def test_pages_of_a_small_complex():
    pages = bigraded_pages(complex_couple(KILL), 3)
    nonzero = [{e: k for e, k in page_orders(p).items() if k > 1} for p in pages]
    assert nonzero[0] == {(0, 0): 2, (1, 1): 2}
    assert nonzero[1] == {} and nonzero[2] == {}
    assert pages[0].targets[(1, 1)] == (0, 0)  # d^1 has bidegree (-1, -1)
    assert pages[1].targets[(1, 1)] == (0, -1)  # d^2 has bidegree (-1, -2)


def test_longer_differential():
    # ∂b = a across two filtration steps survives to page 2 and dies on page 3
    fc = FilteredComplex(((0,), (2,)), ((0,), (1,)))
    pages = bigraded_pages(complex_couple(fc), 3)
    alive = [{e for e, k in page_orders(p).items() if k > 1} for p in pages]
    assert alive[0] == alive[1] == {(0, 0), (1, 2)}
    assert alive[2] == set()


@pytest.mark.parametrize("seed", range(12))
def test_iteration_matches_repeated_derivation(seed):
    c = complex_couple(random_filtered_complex(random.Random(seed)))
    assert iterate(c, 1) is c
    for r in (1, 2, 3):
        assert structural_mismatches(c, r) == []


@pytest.mark.parametrize("seed", range(12))
def test_spectral_pages_converge_to_graded_homology(seed):
    fc = random_filtered_complex(random.Random(seed))
    pages = bigraded_pages(complex_couple(fc), fc.steps + 1)
    got = page_orders(pages[-1])
    for e, want in graded_homology(fc.levels, fc.diff).items():
        assert got.get(e, 1) == want, e


def test_pages_are_subquotients_with_null_dd():
    C = NGP
    for seed in range(6):
        fc = random_filtered_complex(random.Random(100 + seed))
        for page in bigraded_pages(complex_couple(fc), 3):
            for e, s in page.entries.items():
                assert C.sub_leq(s.ambient, s.den, s.num)
            for e, de in page.differentials.items():
                t = page.targets[e]
                assert e[0] - t[0] == 1 and e[1] - t[1] == page.r
                if t in page.differentials:
                    assert C.is_null(C.compose(page.differentials[t], de))


def test_exact_v_and_del_stay_exact():
    rng = random.Random(5)
    seen = 0
    for _ in range(20):
        c = complex_couple(random_filtered_complex(rng))
        d = derive_couple(c)
        for e in c.window:
            if is_exact_morphism(NGP, c.v(e)) and is_exact_morphism(NGP, c.d(e)):
                assert is_exact_morphism(NGP, d.v(e)) and is_exact_morphism(NGP, d.d(e))
                seen += 1
    assert seen > 50


# ---------------------------------------------------------------- ungraded couples


def _null_E_couple(D, u):
    z = trivial_group()
    return ungraded_couple(GP, D, z, u, GP.to_zero(D), GP.from_zero(D))


def test_null_E_with_iso_u():
    swap = Arrow(Z4, Z4, FrozenMap((x, (3 * x) % 4) for x in range(4)))
    c = _null_E_couple(Z4, swap)
    assert check_exact_couple(c).ok
    d = derive_couple(c)
    assert d.D(()).size == 4 and d.E(()).size == 1  # Nim u is all of D
    pages = bigraded_pages(c, 3)
    assert all(page_orders(p) == {(): 1} for p in pages)


def test_null_E_forces_u_iso():
    double = Arrow(Z4, Z4, FrozenMap((x, (2 * x) % 4) for x in range(4)))
    rep = check_exact_couple(_null_E_couple(Z4, double))
    assert not rep.ok and "a" in rep.failures
    with pytest.raises(CoupleError, match="not an exact couple"):
        derive_couple(_null_E_couple(Z4, double))


@given(st.randoms(use_true_random=False))
def test_abelian_couples_derive_exact(rng):
    c = random_abelian_couple(rng)
    rep = check_exact_couple(c)
    assert rep.ok, rep.summary()
    assert check_exact_couple(derive_couple(c)).ok


def test_abelian_clauses_b_to_d_are_automatic():
    # in Gp on abelian groups every morphism is exact and every connection modular
    rng = random.Random(0)
    for _ in range(20):
        rep = check_exact_couple(random_abelian_couple(rng))
        assert rep.ok and rep.checked["b"] > 0


# ---------------------------------------------------------------- towers


def test_tower_couple_in_nac_is_quasi_exact():
    c = tower_couple(z4_tower(), "nac")
    rep = check_exact_couple(c)
    assert c.quasi and rep.ok
    assert rep.u_exactness_positions and all(y[0] >= 1 for y, _ in rep.u_exactness_positions)


def test_tower_couple_in_ngp_is_exact():
    c = tower_couple(z4_tower(), "ngp")
    assert not c.quasi and check_exact_couple(c).ok
    e0 = c.E((0, -1))
    assert (len(e0.top), len(e0.sub)) == (2, 2)  # π₁X₀ modulo the image of π₁X₁


def test_tower_pages():
    for kind in ("nac", "ngp"):
        c = tower_couple(z4_tower(), kind)
        pages = bigraded_pages(c, 3)
        for page in pages:
            C = c.category
            for e, de in page.differentials.items():
                t = page.targets[e]
                if t in page.differentials:
                    assert C.is_null(C.compose(page.differentials[t], de))
        assert check_exact_couple(derive_couple(c)).ok


def test_tower_page_sizes():
    pages = bigraded_pages(tower_couple(z4_tower(), "nac"), 2)
    big = {e: k for e, k in page_orders(pages[0]).items() if k > 1}
    # π₁ of the fibres: Z/2 = π₁X₀ at p = 0 and Z/2 = ker(Z/4 -> Z/2) at p = -1
    assert big == {(2, 0): 2, (2, -1): 2}


def test_one_level_tower_is_its_own_fibre():
    for g in small_groups(6):
        t = group_tower([g], [None])
        assert len(tower_couple(t, "ngp").E((1, 0)).top) == g.size
        assert len(tower_couple(t, "nac").E((2, 0)).points) == g.size


def test_random_towers():
    rng = random.Random(2)
    groups = small_groups(6)
    for _ in range(10):
        t = random_group_tower(rng, groups, rng.randint(1, 3))
        for kind in ("nac", "ngp"):
            c = tower_couple(t, kind)
            assert check_exact_couple(derive_couple(c)).ok


def test_tower_errors():
    with pytest.raises(ValueError):
        tower_couple(z4_tower(), "gp")
    with pytest.raises(CategoryError):
        group_tower([Z2, Z4], [None, {x: x % 2 if x != 1 else 0 for x in range(4)}])


def test_window_truncation_is_reported():
    c = complex_couple(KILL)
    D = {x: c.D(x) for x in [(0, 0), (0, 1)]}
    E = {e: c.E(e) for e in [(0, 0), (1, 1)]}
    u = {(0, 1): c.u((0, 1))}
    v = {(0, 0): c.v((0, 0))}
    small = bigraded_couple(NGP, D, E, u, v, {}, window=[(0, 0), (1, 1)])
    pages = bigraded_pages(small, 2, audit=False)
    assert any("outside the supplied window" in why for _, why in pages[1].truncated)

