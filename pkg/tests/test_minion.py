import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from promlin.algebra import ab_preorder, is_regular
from promlin.classify import classify
from promlin.corpus import d4_s4, m3, monoid_corpus, named_algebra, tractable_templates, z2ext
from promlin.eqsys import PromiseTemplate, is_homomorphism
from promlin.minion import (EvenArity, MinionElement, MinionError, NotRegular, RegularTarget, all_maps,
                            block_symmetric_tuple, build_alternating_poly, build_block_symmetric_poly,
                            check_2block_symmetric, check_alternating, enumerate_minion, free_structure_polymorphisms,
                            free_structure_template, is_block_symmetric_tuple, is_plin_polymorphism,
                            minion_axioms_hold, minor, no_alternating_certificate, polymorphism_minor,
                            polymorphism_to_tuple, relevant_coordinate_claims, relevant_coordinates,
                            tuple_to_polymorphism, verify_selection_condition, verify_tuple_bijection)

M3 = m3()
ONE, EPS = M3.labels.index("1"), M3.labels.index("eps")


def targets(max_size, regular=None):
    out = []
    for name, M in monoid_corpus(8):
        if M.size <= max_size:
            for a in M.elements:
                if regular is None or is_regular(M, a) == regular:
                    out.append((name, M, a))
    return out


# --------------------------------------------------------------------------- elements and minors


def test_minor_multiplies_blocks():
    Z3 = named_algebra("Z3")
    b = MinionElement(Z3, 0, (1, 1, 1))
    assert minor(b, (0, 0, 1), 2).entries == (2, 1)


def test_empty_block_gives_identity():
    b = MinionElement(M3, ONE, (ONE,))
    assert minor(b, (0,), 3).entries == (ONE, 0, 0)


def test_identity_minor():
    b = MinionElement(M3, EPS, (ONE, ONE, 0))
    assert minor(b, (0, 1, 2), 3) == b


def test_bad_product_rejected():
    with pytest.raises(MinionError):
        MinionElement(M3, ONE, (ONE, ONE))


def test_enumeration_examples():
    assert sorted(b.entries for b in enumerate_minion(M3, ONE, 2)) == [(0, 1), (1, 0)]
    assert [b.entries for b in enumerate_minion(named_algebra("trivial"), 0, 1)] == [(0,)]
    assert len(enumerate_minion(named_algebra("Z2"), 1, 3)) == 4


@given(st.sampled_from(targets(4)), st.integers(1, 3), st.data())
def test_minors_stay_in_minion(case, n, data):
    _, M, a = case
    elems = enumerate_minion(M, a, n)
    if not elems:
        return
    b = data.draw(st.sampled_from(elems))
    m = data.draw(st.integers(1, 3))
    pi = data.draw(st.tuples(*[st.integers(0, m - 1)] * n))
    c = minor(b, pi, m)
    assert c in set(enumerate_minion(M, a, m))


@given(st.sampled_from(targets(3)), st.data())
def test_minor_composition(case, data):
    _, M, a = case
    n = data.draw(st.integers(1, 3))
    elems = enumerate_minion(M, a, n)
    if not elems:
        return
    b = data.draw(st.sampled_from(elems))
    m, k = data.draw(st.integers(1, 3)), data.draw(st.integers(1, 3))
    pi = data.draw(st.tuples(*[st.integers(0, m - 1)] * n))
    sigma = data.draw(st.tuples(*[st.integers(0, k - 1)] * m))
    assert minor(minor(b, pi, m), sigma, k) == minor(b, tuple(sigma[j] for j in pi), k)


def test_axioms_small():
    assert minion_axioms_hold(M3, ONE, 3)
    assert minion_axioms_hold(named_algebra("Z2"), 1, 3)


# --------------------------------------------------------------------------- relevant coordinates


def test_relevant_single_entry():
    assert relevant_coordinates(MinionElement(M3, ONE, (ONE,))) == {0}


def test_relevant_nonempty_and_bounded():
    for n in range(1, 5):
        for b in enumerate_minion(M3, ONE, n):
            rel = relevant_coordinates(b)
            assert 1 <= len(rel) <= M3.size


@given(st.sampled_from(targets(4, regular=False)), st.data())
def test_relevant_coordinates_survive_minors(case, data):
    _, M, a = case
    n = data.draw(st.integers(1, 4))
    elems = enumerate_minion(M, a, n)
    if not elems:
        return
    b = data.draw(st.sampled_from(elems))
    m = data.draw(st.integers(1, 3))
    pi = data.draw(st.tuples(*[st.integers(0, m - 1)] * n))
    rel = relevant_coordinates(b)
    image = relevant_coordinates(minor(b, pi, m))
    assert rel and len(rel) <= M.size
    assert {pi[i] for i in rel} & image


def test_relevant_coordinates_are_strictly_above():
    for b in enumerate_minion(M3, ONE, 3):
        for j in relevant_coordinates(b):
            rest = M3.product(x for i, x in enumerate(b.entries) if i != j)
            assert ab_preorder(M3, ONE, rest) and not ab_preorder(M3, rest, ONE)


def test_selection_condition():
    assert verify_selection_condition(M3, ONE, 4).ok
    with pytest.raises(RegularTarget):
        verify_selection_condition(M3, EPS, 4)


@pytest.mark.parametrize("name,M,a", targets(4, regular=False))
def test_claims_on_nonregular_targets(name, M, a):
    assert relevant_coordinate_claims(M, a, 3).ok
    assert verify_selection_condition(M, a, 3).ok


# --------------------------------------------------------------------------- block symmetric tuples


def test_block_symmetric_examples():
    assert block_symmetric_tuple(named_algebra("Z2"), 1, 1).entries == (1, 1, 1)
    # the least regularity partner of eps is the identity
    assert block_symmetric_tuple(M3, EPS, 1).entries == (EPS, EPS, 0)
    with pytest.raises(NotRegular):
        block_symmetric_tuple(M3, ONE, 1)


@pytest.mark.parametrize("arity", [3, 5, 7])
def test_block_symmetric_tuples_exist_for_regular_targets(arity):
    n = arity // 2
    for name, M, a in targets(8, regular=True):
        b = block_symmetric_tuple(M, a, n)
        assert b.arity == arity and is_block_symmetric_tuple(b, n + 1), name


# --------------------------------------------------------------------------- polymorphism constructions


def test_block_poly_over_z2ext():
    t = PromiseTemplate.csp(z2ext())
    psi = classify(t).witness
    p = build_block_symmetric_poly(psi, 1)
    assert p.exponent == 3 and p.blocks() == ((0, 1), (2,))
    for args in itertools.product(range(3), repeat=3):
        assert p(args) == z2ext().product(args)
    assert is_plin_polymorphism(p, 3, t)
    assert check_2block_symmetric(p, 3, 3, p.blocks())


def test_alternating_over_d4():
    D, S, phi_square, _ = d4_s4()
    t = PromiseTemplate(D, S, phi_square)
    q = build_alternating_poly(classify(t).witness, 1)
    assert is_plin_polymorphism(q, 3, t) and check_alternating(q, D.size, 3)


def test_projection_is_polymorphism_but_not_alternating():
    t = PromiseTemplate.csp(named_algebra("Z3"))

    def proj(args):
        return args[0]
    assert is_plin_polymorphism(proj, 3, t)
    assert not check_alternating(proj, 3, 3)


def test_constant_map_breaks_diagonal():
    t = PromiseTemplate.csp(named_algebra("Z2"))
    assert not is_plin_polymorphism(lambda args: 0, 3, t)


def test_alternating_requires_odd_arity():
    with pytest.raises(EvenArity):
        check_alternating(lambda args: args[0], 2, 2)


def test_group_alternating_identity_on_z4():
    Z4 = named_algebra("Z4")
    assert check_alternating(lambda a: (a[0] - a[1] + a[2]) % 4, 4, 3)
    assert not check_alternating(lambda a: (a[0] + a[1] + a[2]) % 4, 4, 3)
    del Z4


@pytest.mark.parametrize("nt", tractable_templates(), ids=lambda nt: nt.name)
@pytest.mark.parametrize("arity", [3, 5])
def test_constructions_on_corpus(nt, arity):
    n = arity // 2
    p = build_block_symmetric_poly(nt.witness, n)
    assert is_plin_polymorphism(p, arity, nt.template)
    assert check_2block_symmetric(p, nt.template.source.size, arity, p.blocks())
    if nt.template.is_group_template():
        q = build_alternating_poly(nt.witness, n)
        assert is_plin_polymorphism(q, arity, nt.template)
        assert check_alternating(q, nt.template.source.size, arity)


def test_no_alternating_polymorphisms_for_z2ext():
    assert no_alternating_certificate(z2ext(), 3)
    assert no_alternating_certificate(z2ext(), 5)
    assert not no_alternating_certificate(named_algebra("Z2"), 3)


# --------------------------------------------------------------------------- free structures


def test_free_structure_sizes():
    _, B = free_structure_template(M3, ONE)
    assert len(B.universe) == 2
    _, B = free_structure_template(named_algebra("Z2"), 1)
    # (1,0,0) in three positions and (1,1,1)
    assert len(B.universe) == 2 and len(B.relations["R"]) == 4
    _, B = free_structure_template(named_algebra("trivial"), 0)
    assert len(B.universe) == 1


def test_bijection_examples():
    assert len(free_structure_polymorphisms(M3, ONE, 2)) == 2
    assert verify_tuple_bijection(named_algebra("Z2"), 1, 3).ok


@pytest.mark.parametrize("name,M,a", targets(3))
def test_bijection_small(name, M, a):
    rep = verify_tuple_bijection(M, a, 3)
    assert rep.ok, rep.violation
    for n, (polys, elems) in rep.counts.items():
        assert polys == elems


@given(st.sampled_from(targets(3)), st.data())
def test_tuple_to_polymorphism_round_trip(case, data):
    _, M, a = case
    n = data.draw(st.integers(1, 3))
    elems = enumerate_minion(M, a, n)
    if not elems:
        return
    b = data.draw(st.sampled_from(elems))
    p = tuple_to_polymorphism(b)
    A, B = free_structure_template(M, a)
    from promlin.minion import structure_power
    assert is_homomorphism(p, structure_power(A, n), B)
    assert polymorphism_to_tuple(p, n, M, a) == b
    m = data.draw(st.integers(1, 3))
    pi = data.draw(st.tuples(*[st.integers(0, m - 1)] * n))
    assert polymorphism_to_tuple(polymorphism_minor(p, pi, m), m, M, a) == minor(b, pi, m)
