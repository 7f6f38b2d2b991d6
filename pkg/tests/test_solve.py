import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from promlin.algebra import PartialHom, SubAlgebra
from promlin.classify import classify
from promlin.corpus import d4_s4, monoid_corpus, named_algebra, planted_instance, tractable_templates, z2ext
from promlin.eqsys import EquationSystem, Fix, Mul, PromiseTemplate, brute_force_solve, check_promise_solution
from promlin.solve import (NotAbelian, PromiseViolated, cross_check, solve_abelian_group_system, solve_promise,
                           translate_to_image)

from strategies import systems, templates
from test_relax import AIP_GAP


def solve_csp(name, sys, engine="blp-aip"):
    t = PromiseTemplate.csp(named_algebra(name))
    return solve_promise(t, sys, classify(t).witness, engine=engine)


def test_unique_solution_over_z2():
    rep = solve_csp("Z2", EquationSystem(["x", "y", "z"], [Mul("x", "y", "z"), Fix("x", 1), Fix("z", 1)]))
    assert rep.assignment == {"x": 1, "y": 0, "z": 1}
    assert rep.path == "blp_aip_selfreduce"


def test_d4_rotation_goes_to_its_square():
    D, S, phi_square, _ = d4_s4()
    t = PromiseTemplate(D, S, phi_square)
    r = D.labels.index("r")
    rep = solve_promise(t, EquationSystem(["x"], [Fix("x", r)]), classify(t).witness)
    assert rep.assignment["x"] == phi_square.mapping[D.labels.index("r2")] or \
        rep.assignment["x"] == phi_square.mapping[r]
    assert S.labels[rep.assignment["x"]] == "(0 2)(1 3)"


def test_promise_violation_is_reported():
    with pytest.raises(PromiseViolated):
        solve_csp("Z2", EquationSystem(["x", "y"], [Mul("x", "x", "y"), Fix("y", 1)]))


def test_gap_instance_rejected_by_default_engine():
    with pytest.raises(PromiseViolated):
        solve_csp("Z2ext", AIP_GAP)


def test_brute_engine_on_hard_template():
    t = PromiseTemplate.csp(named_algebra("S3"))
    rep = solve_promise(t, EquationSystem(["x", "y"], [Mul("x", "y", "x")]), None, engine="brute")
    assert rep.path == "brute_force" and check_promise_solution(t, EquationSystem(["x", "y"], [Mul("x", "y", "x")]),
                                                                  rep.assignment)


# --------------------------------------------------------------------------- abelian groups


def test_group_least_square_root():
    sol = solve_abelian_group_system(named_algebra("Z4"), EquationSystem(["x", "y"], [Mul("x", "x", "y"),
                                                                                       Fix("y", 2)]))
    assert sol == {"x": 1, "y": 2}


def test_group_free_product_is_identity():
    G = named_algebra("Z2xZ2")
    sol = solve_abelian_group_system(G, EquationSystem(["x", "y", "z"], [Mul("x", "y", "z")]))
    assert sol == {"x": G.identity, "y": G.identity, "z": G.identity}


def test_group_unsat():
    assert solve_abelian_group_system(named_algebra("Z2"), EquationSystem(["x", "y"], [Mul("x", "x", "y"),
                                                                                      Fix("y", 1)])) is None


def test_group_direct_needs_abelian():
    with pytest.raises(NotAbelian):
        solve_abelian_group_system(named_algebra("S3"), EquationSystem(["x"], []))


@given(st.sampled_from(["Z2", "Z3", "Z4", "Z6", "Z2xZ2"]).flatmap(
    lambda n: st.tuples(st.just(n), systems(named_algebra(n).size, max_vars=4))))
def test_group_direct_matches_brute_force(case):
    name, sys = case
    G = named_algebra(name)
    assert solve_abelian_group_system(G, sys) == brute_force_solve(sys, G)


# --------------------------------------------------------------------------- planted and cross checked


@given(templates, st.integers(0, 10 ** 6))
def test_planted_instances_are_solved(nt, seed):
    rng = random.Random(seed)
    sys, planted = planted_instance(rng, nt.template, rng.randint(1, 6), rng.randint(1, 7))
    rep = solve_promise(nt.template, sys, nt.witness)
    assert check_promise_solution(nt.template, sys, rep.assignment)


@given(templates, st.integers(0, 10 ** 6))
def test_solution_lies_in_witness_image(nt, seed):
    rng = random.Random(seed)
    sys, _ = planted_instance(rng, nt.template, rng.randint(1, 5), rng.randint(1, 6))
    rep = solve_promise(nt.template, sys, nt.witness)
    assert set(rep.assignment.values()) <= set(nt.witness.image.members)


@given(templates, st.integers(0, 10 ** 6))
def test_group_paths_agree(nt, seed):
    if not nt.template.is_group_template():
        return
    rng = random.Random(seed)
    sys, _ = planted_instance(rng, nt.template, rng.randint(1, 5), rng.randint(1, 6))
    a = solve_promise(nt.template, sys, nt.witness, engine="group-direct")
    b = solve_promise(nt.template, sys, nt.witness)
    assert check_promise_solution(nt.template, sys, a.assignment)
    assert check_promise_solution(nt.template, sys, b.assignment)


def _small_csp_templates():
    out = []
    for name, M in monoid_corpus(8):
        if M.size <= 4:
            t = PromiseTemplate.csp(M)
            res = classify(t)
            if res.tractable:
                out.append((name, t, res.witness))
    return out


SMALL_TRACTABLE = _small_csp_templates()


@given(st.sampled_from(SMALL_TRACTABLE).flatmap(
    lambda c: st.tuples(st.just(c), systems(c[1].source.size, max_vars=4))))
def test_cross_check_small_monoids(case):
    (name, t, psi), sys = case
    rep = cross_check(t, sys, psi)
    assert rep.ok, (name, rep.discrepancies)


def test_z2ext_excludes_aip():
    t = PromiseTemplate.csp(z2ext())
    rep = cross_check(t, AIP_GAP, classify(t).witness)
    assert rep.excluded == ["aip"] and rep.answers["aip"] and rep.ok


def test_translation_maps_constants_through_witness():
    D, S, phi_square, _ = d4_s4()
    t = PromiseTemplate(D, S, phi_square)
    psi = classify(t).witness
    M, emb, local = translate_to_image(EquationSystem(["x"], [Fix("x", D.labels.index("r"))]), psi)
    assert M.size == len(psi.image.members)
    assert emb[local.equations[0].c] == psi.mapping[D.labels.index("r")]
