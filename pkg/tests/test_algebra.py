import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from promlin import oracle
from promlin.algebra import (AlgebraError, Group, Monoid, PartialHom, Semigroup, SubAlgebra, ab_preorder, closure,
                             div_preorder, enumerate_extending_homs, is_abelian, is_regular, is_union_of_subgroups,
                             QuotientUndefined,
                             quotient_semilattice, regularity_witnesses, sim_classes)
from promlin.corpus import d4_s4, m3, monoid_corpus, named_algebra, z2ext
from promlin.families import (all_monoids, monoids_by_search, chain_semilattice, cyclic_group, direct_product, groups_up_to_order,
                              monogenic_monoid, symmetric_group, trivial_monoid)
from promlin.reduce import build_band, Digraph

from strategies import MONOIDS, monoid_and_elements


def idx(M, label):
    return M.labels.index(label)


# --------------------------------------------------------------------------- construction


def test_rejects_non_associative_table():
    with pytest.raises(AlgebraError):
        Semigroup("ab", [[0, 1], [0, 0]])


def test_rejects_bad_identity():
    with pytest.raises(AlgebraError):
        Monoid("ab", [[0, 1], [1, 1]], 1)


def test_group_requires_inverses():
    with pytest.raises(AlgebraError):
        Group("ab", [[0, 1], [1, 1]], 0)


def test_monoid_counts_match_known_sequence():
    # isomorphism classes of monoids of orders 1..5
    assert [len(all_monoids(n)) for n in (1, 2, 3, 4, 5)] == [1, 2, 7, 35, 228]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_cell_search_matches_exhaustive_tables(n):
    assert {M.table for M in monoids_by_search(n)} == {M.table for M in all_monoids(n)}


def test_group_counts():
    orders = [G.size for _, G in groups_up_to_order(8)]
    assert [orders.count(n) for n in range(1, 9)] == [1, 1, 1, 2, 1, 2, 1, 5]


# --------------------------------------------------------------------------- abelian and regular


def test_abelian_examples():
    assert is_abelian(trivial_monoid())
    assert not is_abelian(named_algebra("D4"))
    assert is_abelian(m3())


def test_regular_examples():
    M = m3()
    assert is_regular(M, M.identity)
    assert not is_regular(M, idx(M, "1"))
    assert is_regular(M, idx(M, "eps"))


def test_regularity_witness_examples():
    M = m3()
    w = regularity_witnesses(M, idx(M, "eps"))
    assert w.all_present() and w.k_power == 2
    assert regularity_witnesses(M, idx(M, "1")).all_absent()
    Z2 = cyclic_group(2)
    w = regularity_witnesses(Z2, 1)
    assert w.all_present() and w.k_power == 3


def test_union_of_subgroups_examples():
    assert is_union_of_subgroups(symmetric_group(3))
    assert not is_union_of_subgroups(m3())
    assert is_union_of_subgroups(z2ext())


@given(monoid_and_elements(k=1))
def test_regularity_forms_agree(case):
    M, s = case
    w = regularity_witnesses(M, s)
    assert w.all_present() or w.all_absent()
    assert w.all_present() == is_regular(M, s) == oracle.regular_by_definition(M.table, s)


# --------------------------------------------------------------------------- preorders


def test_divisibility_examples():
    M = m3()
    one, eps = idx(M, "1"), idx(M, "eps")
    assert div_preorder(M, eps, one)
    assert not div_preorder(M, one, eps)
    assert ab_preorder(M, eps, one)
    assert not ab_preorder(M, one, eps)


@given(monoid_and_elements(k=1))
def test_preorders_reflexive(case):
    M, a = case
    assert div_preorder(M, a, a) and ab_preorder(M, a, a)


@given(monoid_and_elements(k=3))
def test_divisibility_transitive(case):
    M, a, b, c = case
    if div_preorder(M, a, b) and div_preorder(M, b, c):
        assert div_preorder(M, a, c)


@given(monoid_and_elements(k=3, pool=[M for M in MONOIDS if is_abelian(M)]))
def test_commuting_divisibility_transitive_when_commutative(case):
    M, a, b, c = case
    if ab_preorder(M, a, b) and ab_preorder(M, b, c):
        assert ab_preorder(M, a, c)


def test_commuting_divisibility_not_transitive_in_general():
    M = Monoid("abcd", ((0, 1, 2, 3), (1, 0, 2, 3), (2, 3, 2, 3), (3, 2, 2, 3)), 0)
    assert ab_preorder(M, 2, 0) and ab_preorder(M, 0, 1)
    assert not ab_preorder(M, 2, 1)


@given(monoid_and_elements(k=2))
def test_commuting_divisor_implies_divisibility(case):
    M, a, b = case
    if ab_preorder(M, a, b):
        assert div_preorder(M, a, b)


@given(monoid_and_elements(k=2))
def test_commuting_divisor_is_monotone_under_commuting_products(case):
    M, a, b = case
    # anything that commutes with b and divides it from b's side stays below b
    for c in M.elements:
        if M.commute(b, c):
            assert ab_preorder(M, M.mul(b, c), b)


# --------------------------------------------------------------------------- classes and quotients


def test_group_is_one_class():
    assert len(sim_classes(symmetric_group(3))) == 1


def test_semilattice_classes_are_singletons():
    S = chain_semilattice(3)
    assert sorted(sim_classes(S)) == [(0,), (1,), (2,)]


def test_one_edge_band_has_seven_classes():
    B = build_band(Digraph((0, 1), {(0, 1)}))
    assert len(sim_classes(B.semigroup)) == 7
    Q, _ = quotient_semilattice(B.semigroup)
    assert Q.is_semilattice()


@given(st.sampled_from(MONOIDS))
def test_quotient_is_homomorphic_image(M):
    try:
        Q, proj = quotient_semilattice(M)
    except QuotientUndefined:
        return
    for a, b in itertools.product(M.elements, repeat=2):
        assert proj[M.mul(a, b)] == Q.mul(proj[a], proj[b])


# --------------------------------------------------------------------------- homomorphisms


def test_d4_square_map_extends_to_abelian_hom():
    D, S, phi_square, phi_embed = d4_s4()
    found = list(enumerate_extending_homs(D, S, phi_square, "abelian_image"))
    assert found
    r, f = idx(D, "r"), idx(D, "f")
    assert any(h.mapping[r] == phi_square.mapping[r] and h.mapping[f] == idx(S, S.labels[h.mapping[f]])
               for h in found)
    assert not list(enumerate_extending_homs(D, S, phi_embed, "abelian_image"))


@given(st.sampled_from([M for M in MONOIDS if M.size <= 4]))
def test_identity_extends_itself(M):
    ident = PartialHom.identity_on(M)
    assert any(h.mapping == ident.mapping for h in enumerate_extending_homs(M, M, ident))


@pytest.mark.parametrize("pair", [("Z2", "Z4"), ("M3", "Z2ext"), ("S3", "Z2"), ("chain3", "M3")])
def test_hom_enumeration_matches_exhaustive(pair):
    M1, M2 = named_algebra(pair[0]), named_algebra(pair[1])
    got = sorted(tuple(h.mapping[s] for s in M1.elements) for h in enumerate_extending_homs(M1, M2))
    expect = sorted(map(tuple, oracle.all_monoid_homs(M1.table, M1.identity, M2.table, M2.identity).tolist()))
    assert got == expect


def test_closure_generates_rotations():
    D = named_algebra("D4")
    rot = closure(D, [idx(D, "r")], "monoid")
    assert {D.labels[s] for s in rot} == {"e", "r", "r2", "r3"}


def test_direct_product_table():
    P = direct_product(cyclic_group(2), cyclic_group(3))
    assert P.size == 6 and is_abelian(P)
    assert np.array_equal(P.np_table, P.np_table.T)


def test_monogenic_shape():
    M = monogenic_monoid(2, 1)
    assert M.size == 3 and M.power(1, 2) == M.power(1, 5)


def test_partial_hom_rejects_non_hom():
    Z4, Z2 = named_algebra("Z4"), named_algebra("Z2")
    with pytest.raises(AlgebraError):
        PartialHom(Z4, Z2, SubAlgebra(Z4, [0, 1, 2, 3], "monoid"), {0: 0, 1: 0, 2: 1, 3: 0})


def test_corpus_is_nonempty_and_named():
    names = [n for n, _ in monoid_corpus(8)]
    assert len(names) == len(set(names)) and {"M3", "Z2ext", "D4", "Q8"} <= set(names)
