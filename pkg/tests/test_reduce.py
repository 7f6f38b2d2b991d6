import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from promlin.algebra import Semigroup, find_isomorphism, quotient_semilattice
from promlin.eqsys import EquationSystem, Fix, Mul, all_solutions, brute_force_solve, find_homomorphism, normalize
from promlin.families import chain_semilattice
from promlin.reduce import (Digraph, NotSemilattice, PsiReject, PsiResult, SigmaPlus, all_digraphs, all_sigma_plus,
                            build_band, build_edge_band, check_general, class_meet, digraph_plus,
                            digraph_to_equations, equations_to_digraph, extended_digraph_reduce, hom_equivalent,
                            hom_to_solution, random_sigma_plus, reduction_equivalence_check, solution_to_hom,
                            solve_equations_over_band, solve_semilattice_min)

W = build_edge_band()
EDGE = Digraph(("a", "b"), {("a", "b")})
SINGLE = SigmaPlus(("a", "b"), {("a", "b")}, (), ())

small_digraphs = st.integers(0, 3).flatmap(lambda n: st.sampled_from(all_digraphs(n)))
marked = st.integers(0, 4).flatmap(lambda n: st.integers(0, 10 ** 6).map(
    lambda seed: random_sigma_plus(random.Random(seed), n)))


# --------------------------------------------------------------------------- digraphs and bands


def test_plus_sizes():
    assert (len(digraph_plus(Digraph((), ())).vertices), len(digraph_plus(Digraph((), ())).edges)) == (2, 1)
    plus = digraph_plus(EDGE)
    assert (len(plus.vertices), len(plus.edges)) == (4, 2)


@given(small_digraphs)
def test_plus_adds_two_vertices_and_one_edge(D):
    plus = digraph_plus(D)
    assert len(plus.vertices) == len(D.vertices) + 2 and len(plus.edges) == len(D.edges) + 1
    assert len(plus.P) == len(plus.Q) == 1


def test_band_sizes():
    assert build_band(EDGE).semigroup.size == 23
    assert W.semigroup.size == 12


def test_r_class_times_l_element():
    B = build_band(EDGE)
    S = B.semigroup
    r = B.element("R", "b")
    left = B.element("L", "a")
    assert S.mul(r, left) == B.element("LR", "a")


def test_class_meets():
    assert class_meet("L", "R") == "LR"
    assert class_meet("C", "L") == "LC"
    assert class_meet("R", "C") == "CR"
    assert class_meet("LC", "CR") == "0"


@given(small_digraphs)
def test_band_laws(D):
    B = build_band(D)
    S = B.semigroup
    assert S.size == 5 * (len(D.vertices) + 2) + len(D.edges) + 2
    assert S.is_right_normal_band()
    cls = S.sim_class_of
    assert len(set(cls)) == 7
    for s, t in itertools.combinations(S.elements, 2):
        if cls[s] == cls[t]:
            assert S.table[s] == S.table[t]
    Q, _ = quotient_semilattice(S)
    QW, _ = quotient_semilattice(W.semigroup)
    assert Q.is_semilattice() and find_isomorphism(Q, QW) is not None


@given(small_digraphs)
def test_planted_copy_is_subband(D):
    B = build_band(D)
    emb = B.embed_edge_band(W)
    S, T = B.semigroup, W.semigroup
    for a, b in itertools.product(T.elements, repeat=2):
        assert S.mul(emb[a], emb[b]) == emb[T.mul(a, b)]


# --------------------------------------------------------------------------- digraphs to equations


def test_single_edge_equation_count():
    sys = digraph_to_equations(SINGLE, W)
    assert len(sys.variables) == 7 and len(sys.equations) == 20


def test_marked_vertex_adds_three_equations():
    marked_one = SigmaPlus(("a", "b"), {("a", "b")}, ("a",), ())
    assert len(digraph_to_equations(marked_one, W).equations) == 23


@given(small_digraphs, marked)
def test_homomorphisms_give_solutions_and_back(D, I):
    B = build_band(D)
    system = digraph_to_equations(I, W)
    h = find_homomorphism(I.to_structure(), B.plus.to_structure())
    if h is not None:
        asg = hom_to_solution(I, h, B)
        assert check_general(system, B.semigroup, asg, B.embed_edge_band(W))
        assert solution_to_hom(I, asg, B) == h
    sol = solve_equations_over_band(system, B, W)
    assert (sol is None) == (h is None)
    if sol is not None:
        back = solution_to_hom(I, sol, B)
        assert find_homomorphism(I.to_structure(), B.plus.to_structure(), fixed=back) is not None


# --------------------------------------------------------------------------- semilattices


def test_two_element_semilattice_solution():
    L = chain_semilattice(2)
    bottom = next(s for s in L.elements if L.mul(s, 1 - s) == s)
    top = 1 - bottom
    sys = EquationSystem(["x", "y"], [Mul("x", "y", "x"), Fix("y", top)])
    assert solve_semilattice_min(L, sys) == {"x": bottom, "y": top}
    assert solve_semilattice_min(L, EquationSystem(["x"], [Fix("x", 0), Fix("x", 1)])) is None


def test_semilattice_required():
    with pytest.raises(NotSemilattice):
        solve_semilattice_min(Semigroup("ab", [[0, 1], [0, 1]]), EquationSystem(["x"], []))


@given(st.sampled_from([2, 3, 4]).flatmap(lambda n: st.tuples(st.just(n), st.data())))
def test_semilattice_least_solution(case):
    n, data = case
    L = chain_semilattice(n)
    vs = [f"x{i}" for i in range(data.draw(st.integers(1, 4)))]
    var = st.sampled_from(vs)
    eqs = data.draw(st.lists(st.builds(Mul, var, var, var) | st.builds(Fix, var, st.integers(0, n - 1)), max_size=5))
    sys = EquationSystem(vs, eqs)
    got = solve_semilattice_min(L, sys)
    sols = list(all_solutions(sys, L))
    if not sols:
        assert got is None
        return
    below = [s for s in sols if all(all(L.mul(s[x], u[x]) == s[x] for x in vs) for u in sols)]
    assert below == [got]


# --------------------------------------------------------------------------- equations to digraphs


def test_round_trip_single_edge():
    back = equations_to_digraph(normalize(digraph_to_equations(SINGLE, W), W.semigroup, "semigroup"), W)
    assert isinstance(back, PsiResult) and hom_equivalent(back.structure, SINGLE)
    assert [name for name, _ in back.log] == ["quotient", "pin", "rewrite", "zero", "retag", "drop_unlinked",
                                              "edge_constants", "identify", "parse"]


def test_contradictory_classes_rejected():
    x = EquationSystem(["x"], [Fix("x", W.element("L", W.p)), Fix("x", W.element("R", W.p))])
    assert isinstance(equations_to_digraph(x, W), PsiReject)


def test_lone_pinned_variable_is_dropped():
    # a variable with no links and one constant is always solvable, so it carries no constraint
    res = equations_to_digraph(EquationSystem(["x"], [Fix("x", W.element("L", W.p))]), W)
    assert isinstance(res, PsiResult)
    assert not res.structure.vertices
    assert dict(res.log)["drop_unlinked"] == 1


def test_linked_pinned_variable_becomes_marked_vertex():
    pl = W.element("L", W.p)
    lr = W.element("LR", W.p)
    X = EquationSystem(["x", "y", "c"], [Fix("x", pl), Fix("c", lr), Mul("c", "x", "y")])
    res = equations_to_digraph(X, W)
    assert isinstance(res, PsiResult)
    I = res.structure
    assert len(I.vertices) == 1 and len(I.P) == 1 and not I.edges and not I.Q


@given(marked)
def test_translations_invert(I):
    back = equations_to_digraph(normalize(digraph_to_equations(I, W), W.semigroup, "semigroup"), W)
    assert isinstance(back, PsiResult) and hom_equivalent(back.structure, I)


BANDS = [build_band(D) for k in range(3) for D in all_digraphs(k)]


@given(st.data())
def test_psi_agrees_with_direct_search(data):
    vs = [f"x{i}" for i in range(data.draw(st.integers(1, 4)))]
    var = st.sampled_from(vs)
    eq = st.builds(Mul, var, var, var) | st.builds(Fix, var, st.integers(0, W.semigroup.size - 1))
    X = EquationSystem(vs, data.draw(st.lists(eq, min_size=1, max_size=5)))
    B = data.draw(st.sampled_from(BANDS))
    res = equations_to_digraph(X, W)
    emb = B.embed_edge_band(W)
    direct = brute_force_solve(X, B.semigroup, lambda c: emb[c]) is not None
    via = isinstance(res, PsiResult) and find_homomorphism(res.structure.to_structure(),
                                                           B.plus.to_structure()) is not None
    assert direct == via


# --------------------------------------------------------------------------- marked instances


def test_marked_component_that_cannot_map_is_rejected():
    loop = SigmaPlus(("a",), {("a", "a")}, ("a",), ())
    assert extended_digraph_reduce(loop).verdict == "reject"


def test_empty_instance_accepted():
    assert extended_digraph_reduce(SigmaPlus((), (), (), ())).verdict == "accept"


def test_unmarked_rest_is_kept():
    I = SigmaPlus(("a", "b", "c"), {("a", "b"), ("c", "c")}, ("a",), ())
    out = extended_digraph_reduce(I)
    assert out.verdict == "reduced" and set(out.digraph.vertices) == {"c"}


def test_equivalence_on_small_instances():
    rows = reduction_equivalence_check(EDGE, EDGE, all_sigma_plus(1) + all_sigma_plus(2)[:10])
    assert all(r.ok for r in rows)


def test_equivalence_with_two_different_digraphs():
    other = Digraph(("a",), {("a", "a")})
    rows = reduction_equivalence_check(EDGE, other, all_sigma_plus(2)[:30])
    assert all(r.ok for r in rows)


def test_enumeration_counts():
    assert [len(all_digraphs(n)) for n in range(4)] == [1, 2, 10, 104]
    assert sum(len(all_sigma_plus(n)) for n in range(3)) == 145
