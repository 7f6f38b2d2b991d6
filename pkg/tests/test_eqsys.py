import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from promlin import oracle
from promlin.algebra import SubAlgebra
from promlin.corpus import d4_s4, m3, named_algebra
from promlin.eqsys import (EqsysError, EquationSystem, Fix, Mul, PromiseTemplate, all_solutions, brute_force_solve,
                           check_assignment, check_promise_solution, find_homomorphism, is_homomorphism, normalize,
                           parse_general, structure_to_system, system_to_structure)
from promlin.reduce import check_general

from strategies import systems


def as_oracle(sys):
    pos = {v: i for i, v in enumerate(sys.variables)}
    return [("mul", pos[e.x], pos[e.y], pos[e.z]) if isinstance(e, Mul) else ("fix", pos[e.x], e.c)
            for e in sys.equations]


# --------------------------------------------------------------------------- normalization


def test_normalize_pins_constants_and_splits_words():
    Z3 = named_algebra("Z3")
    g = parse_general("x1 c:1 x2 = c:2", Z3)
    sys = normalize(g, Z3)
    assert all(isinstance(e, (Mul, Fix)) for e in sys.equations)
    assert {"x1", "x2"} <= set(sys.variables)
    assert sys.constants() == {1, 2}


def test_normal_system_is_unchanged():
    Z2 = named_algebra("Z2")
    sys = normalize(parse_general("x y = z", Z2), Z2)
    assert sys.equations == [Mul("x", "y", "z")]


def test_inverse_in_group_mode():
    Z3 = named_algebra("Z3")
    g = parse_general("x^-1 = c:1", Z3)
    sys = normalize(g, Z3, "group")
    sols = {sys.expand(s)["x"] for s in all_solutions(sys, Z3)}
    assert sols == {2}


def test_inverse_needs_group_mode():
    with pytest.raises(EqsysError):
        normalize(parse_general("x^-1 = c:1", m3()), m3(), "group")


def test_parse_rejects_two_equals():
    with pytest.raises(EqsysError):
        parse_general("x = y = z", named_algebra("Z2"))


@given(st.data())
def test_normalization_preserves_solutions(data):
    Z4 = named_algebra("Z4")
    n = data.draw(st.integers(1, 3))
    vs = [f"v{i}" for i in range(n)]
    atom = st.sampled_from(vs).map(lambda v: v) | st.integers(0, 3).map(lambda c: f"c:{c}")
    lines = []
    for _ in range(data.draw(st.integers(1, 3))):
        lhs = data.draw(st.lists(atom, min_size=1, max_size=3))
        rhs = data.draw(st.lists(atom, min_size=1, max_size=2))
        lines.append(" ".join(lhs) + " = " + " ".join(rhs))
    g = parse_general("\n".join(lines), Z4)
    sys = normalize(g, Z4)
    general = {tuple(a[v] for v in g.variables)
               for a in (dict(zip(g.variables, t)) for t in itertools.product(range(4), repeat=len(g.variables)))
               if check_general(g, Z4, a)}
    normal = {tuple(sys.expand(s)[v] for v in g.variables) for s in all_solutions(sys, Z4)}
    assert general == normal


# --------------------------------------------------------------------------- structures


def test_empty_system_structure():
    X = system_to_structure(EquationSystem([], []), [])
    assert X.relations == {"mul": set()}


def test_structure_of_small_system():
    X = system_to_structure(EquationSystem(["x", "y", "z"], [Mul("x", "y", "z"), Fix("x", 1)]), [1])
    assert X.relations["mul"] == {("x", "y", "z")}
    assert X.relations["fix:1"] == {("x",)}


def test_structure_round_trip():
    sys = EquationSystem(["x", "y"], [Mul("x", "x", "y"), Fix("y", 0)])
    assert structure_to_system(system_to_structure(sys, [0])).equations == sys.equations


@given(systems(4, max_vars=4))
def test_solutions_match_homomorphisms(sys):
    Z4 = named_algebra("Z4")
    sols = list(all_solutions(sys, Z4))
    for s in sols:
        assert check_assignment(sys, Z4, s)
    expect = oracle.brute_force_satisfiable(len(sys.variables), as_oracle(sys), Z4.table)
    assert bool(sols) == expect


# --------------------------------------------------------------------------- checking and brute force


def test_check_examples():
    Z2 = named_algebra("Z2")
    sys = EquationSystem(["x", "y"], [Mul("x", "x", "y")])
    assert check_assignment(sys, Z2, {"x": 1, "y": 0})
    D, S, phi_square, _ = d4_s4()
    t = PromiseTemplate(D, S, phi_square)
    r = D.labels.index("r")
    sys = EquationSystem(["x"], [Fix("x", r)])
    assert check_promise_solution(t, sys, {"x": phi_square.mapping[r]})
    assert S.labels[phi_square.mapping[r]] == S.labels[phi_square.mapping[D.labels.index("r3")]]


def test_brute_force_least_solution():
    M = m3()
    assert brute_force_solve(EquationSystem(["x"], [Mul("x", "x", "x")]), M) == {"x": 0}
    assert brute_force_solve(EquationSystem(["x"], [Fix("x", 2)]), M) == {"x": 2}
    assert brute_force_solve(EquationSystem(["x"], [Fix("x", 0), Fix("x", 1)]), M) is None


@given(systems(3, max_vars=4))
def test_brute_force_agrees_with_oracle(sys):
    M = m3()
    got = brute_force_solve(sys, M)
    assert (got is not None) == oracle.brute_force_satisfiable(len(sys.variables), as_oracle(sys), M.table)
    if got is not None:
        assert check_assignment(sys, M, got)


def test_homomorphism_check_detects_bad_map():
    sys = EquationSystem(["x", "y"], [Mul("x", "x", "y")])
    Z2 = named_algebra("Z2")
    from promlin.eqsys import lin_structure
    X, Y = system_to_structure(sys, []), lin_structure(Z2, [])
    assert is_homomorphism({"x": 1, "y": 0}, X, Y)
    assert not is_homomorphism({"x": 1, "y": 1}, X, Y)
    assert find_homomorphism(X, Y) == {"x": 0, "y": 0}


def test_undeclared_variable_rejected():
    with pytest.raises(EqsysError):
        EquationSystem(["x"], [Mul("x", "y", "x")])


def test_constants_outside_domain_rejected():
    Z4 = named_algebra("Z4")
    sub = SubAlgebra(Z4, [0, 2], "monoid")
    with pytest.raises(EqsysError):
        EquationSystem(["x"], [Fix("x", 1)]).validate_constants(sub)
