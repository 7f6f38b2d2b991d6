"""Property suites over the corpora; each returns a SuiteResult row for the verification matrix."""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from typing import Callable

from . import oracle
from .algebra import (Monoid, PartialHom, Semigroup, SubAlgebra, ab_preorder, ab_strictly_below, div_preorder,
                      find_isomorphism, is_abelian, is_regular, is_union_of_subgroups, quotient_semilattice,
                      regularity_witnesses)
from .classify import Verdict, classify_csp, classify_group_template, classify_monoid_template
from .corpus import (corpus_seed, monoid_corpus, planted_instance, tractable_templates, unsat_instance)
from .eqsys import (EquationSystem, Fix, Mul, PromiseTemplate, all_solutions, brute_force_solve,
                    check_assignment, check_promise_solution)
from .families import chain_semilattice, direct_product, groups_up_to_order
from .minion import (BudgetExceeded, block_symmetric_tuple, build_alternating_poly, build_block_symmetric_poly,
                     check_2block_symmetric, check_alternating, is_block_symmetric_tuple, is_plin_polymorphism,
                     minion_axioms_hold, relevant_coordinate_claims, verify_selection_condition,
                     verify_tuple_bijection)
from .reduce import (PsiReject, PsiResult, all_digraphs, all_sigma_plus, build_band, build_edge_band,
                     digraph_to_equations, equations_to_digraph, hom_equivalent, random_sigma_plus,
                     reduction_equivalence_check, solve_semilattice_min)
from .solve import PromiseViolated, solve_promise
from .eqsys import normalize


@dataclass
class SuiteResult:
    name: str
    ok: bool
    checked: int = 0
    detail: str = ""
    seconds: float = 0.0


def _timed(name: str, fn: Callable[[], tuple[bool, int, str]]) -> SuiteResult:
    t0 = time.perf_counter()
    ok, checked, detail = fn()
    return SuiteResult(name, ok, checked, detail, time.perf_counter() - t0)


def _monoids(max_size: int) -> list[tuple[str, Monoid]]:
    return [(n, M) for n, M in monoid_corpus(8) if M.size <= max_size]


# --------------------------------------------------------------------------- algebra


def preorder_properties(max_size: int = 8) -> tuple[bool, int, str]:
    """Both divisibility relations are reflexive; divisibility is transitive everywhere.

    Commuting divisibility is only transitive on commutative monoids (it can
    fail in non-commutative ones), so transitivity is asserted there only.
    """
    checked = 0
    for name, M in _monoids(max_size):
        els = M.elements
        div = [[div_preorder(M, s, t) for t in els] for s in els]
        ab = [[ab_preorder(M, s, t) for t in els] for s in els]
        rels = [(div, "divisibility")]
        if is_abelian(M):
            rels.append((ab, "commuting divisibility"))
        for s in els:
            if not ab[s][s]:
                return False, checked, f"commuting divisibility not reflexive on {name}"
        for rel, label in rels:
            for s in els:
                if not rel[s][s]:
                    return False, checked, f"{label} not reflexive on {name} at {M.labels[s]}"
            for s, t, u in itertools.product(els, repeat=3):
                checked += 1
                if rel[s][t] and rel[t][u] and not rel[s][u]:
                    return False, checked, f"{label} not transitive on {name}"
    return True, checked, ""


def regularity_equivalence(max_size: int = 8) -> tuple[bool, int, str]:
    """The four forms of regularity appear together, and agree with the definition."""
    checked = 0
    for name, M in _monoids(max_size):
        for s in M.elements:
            checked += 1
            w = regularity_witnesses(M, s)
            if not (w.all_present() or w.all_absent()):
                return False, checked, f"{name}, {M.labels[s]}: witnesses disagree"
            if w.all_present() != is_regular(M, s) or is_regular(M, s) != oracle.regular_by_definition(M.table, s):
                return False, checked, f"{name}, {M.labels[s]}: regularity tests disagree"
    return True, checked, ""


def commuting_divisor_monotonicity(max_size: int = 8) -> tuple[bool, int, str]:
    """For pairwise commuting a, b, c: abc strictly below ab forces ac strictly below a."""
    checked = 0
    for name, M in _monoids(max_size):
        tab = M.table
        els = M.elements
        for a, b, c in itertools.product(els, repeat=3):
            if not (tab[a][b] == tab[b][a] and tab[a][c] == tab[c][a] and tab[b][c] == tab[c][b]):
                continue
            checked += 1
            ab = tab[a][b]
            if ab_strictly_below(M, tab[ab][c], ab) and not ab_strictly_below(M, tab[a][c], a):
                return False, checked, f"{name}: fails at {(M.labels[a], M.labels[b], M.labels[c])}"
    return True, checked, ""


def commuting_divisibility_failure_sites(max_size: int = 8) -> list[tuple[str, tuple]]:
    out = []
    for name, M in _monoids(max_size):
        els = M.elements
        ab = [[ab_preorder(M, s, t) for t in els] for s in els]
        for s, t, u in itertools.product(els, repeat=3):
            if ab[s][t] and ab[t][u] and not ab[s][u]:
                out.append((name, (M.labels[s], M.labels[t], M.labels[u])))
                break
    return out


def commuting_divisibility_failures(max_size: int = 8) -> tuple[bool, int, str]:
    """Every transitivity failure of commuting divisibility sits in a non-commutative monoid."""
    sites = commuting_divisibility_failure_sites(max_size)
    names = dict(_monoids(max_size))
    bad = [n for n, _ in sites if is_abelian(names[n])]
    detail = "recorded in " + ", ".join(n for n, _ in sites) if sites else ""
    return not bad, len(sites), detail if not bad else f"commutative failures: {bad}"


# --------------------------------------------------------------------------- classification


def _cyclic_templates(M1: Monoid, M2: Monoid):
    seen = set()
    for s in M1.elements:
        dom = tuple(oracle.cyclic_submonoid(M1.table, M1.identity, s))
        if dom in seen:
            continue
        seen.add(dom)
        for f in oracle.partial_maps_on_cyclic(M1.table, M1.identity, M2.table, M2.identity, s):
            yield dom, f


def dichotomy_cross_validation(max_size: int = 4) -> tuple[bool, int, str]:
    """Classifier verdicts match a from-the-definition recomputation on every small pair."""
    ms = _monoids(max_size)
    checked = 0
    for (n1, M1), (n2, M2) in itertools.product(ms, repeat=2):
        homs = oracle.all_monoid_homs(M1.table, M1.identity, M2.table, M2.identity)
        for dom, f in _cyclic_templates(M1, M2):
            checked += 1
            expected = oracle.dichotomy_verdict(M1.table, M1.identity, M2.table, M2.identity, f, homs)
            t = PromiseTemplate(M1, M2, PartialHom(M1, M2, SubAlgebra(M1, dom, "monoid"), f))
            got = classify_monoid_template(t).verdict.value
            if got != expected:
                return False, checked, f"{n1} -> {n2} with {f}: classifier {got}, definition {expected}"
    return True, checked, ""


def group_monoid_agreement(max_order: int = 8) -> tuple[bool, int, str]:
    checked = 0
    groups = groups_up_to_order(min(max_order, 8))
    for (n1, G), (n2, H) in itertools.product(groups, repeat=2):
        if G.size * H.size > 64:
            continue
        for dom, f in _cyclic_templates(G, H):
            checked += 1
            t = PromiseTemplate(G, H, PartialHom(G, H, SubAlgebra(G, dom, "monoid"), f))
            a = classify_group_template(t).verdict
            b = classify_monoid_template(t).verdict
            if a != b:
                return False, checked, f"{n1} -> {n2}: group {a.value}, monoid {b.value}"
    return True, checked, ""


def known_csp_dichotomies(max_order: int = 8, max_monoid: int = 5) -> tuple[bool, int, str]:
    """Groups: tractable iff Abelian. Monoids: tractable iff Abelian and a union of subgroups."""
    checked = 0
    for name, G in groups_up_to_order(max_order):
        checked += 1
        if classify_csp(G).tractable != G.is_abelian():
            return False, checked, f"group {name}"
    for name, M in _monoids(max_monoid):
        checked += 1
        expected = is_abelian(M) and is_union_of_subgroups(M)
        if classify_csp(M).tractable != expected:
            return False, checked, f"monoid {name}"
    return True, checked, ""


# --------------------------------------------------------------------------- solving


def solver_exactness(n_sat: int = 200, n_unsat: int = 200, max_vars: int = 6,
                     seed: int | None = None) -> tuple[bool, int, str]:
    """Planted instances are solved and verified; target-unsatisfiable ones are refused."""
    rng = random.Random(corpus_seed() if seed is None else seed)
    temps = list(tractable_templates())
    checked = 0
    for k in range(n_sat):
        nt = temps[k % len(temps)]
        sys, _ = planted_instance(rng, nt.template, rng.randint(2, max_vars), rng.randint(2, 8))
        try:
            rep = solve_promise(nt.template, sys, nt.witness)
        except PromiseViolated:
            return False, checked, f"{nt.name}: planted instance refused"
        if not check_promise_solution(nt.template, sys, rep.assignment):
            return False, checked, f"{nt.name}: returned assignment fails"
        checked += 1
    done = 0
    k = 0
    while done < n_unsat:
        nt = temps[k % len(temps)]
        k += 1
        sys = unsat_instance(rng, nt.template, rng.randint(1, max_vars), rng.randint(2, 8))
        if sys is None:
            continue
        try:
            solve_promise(nt.template, sys, nt.witness)
            return False, checked, f"{nt.name}: unsatisfiable instance was solved"
        except PromiseViolated:
            pass
        done += 1
        checked += 1
    return True, checked, ""


# --------------------------------------------------------------------------- minions


def _targets(max_size: int, regular: bool | None):
    for name, M in _monoids(max_size):
        for a in M.elements:
            r = is_regular(M, a)
            if regular is None or r == regular:
                yield name, M, a


def minion_axioms(max_size: int = 3, max_n: int = 3) -> tuple[bool, int, str]:
    checked = 0
    for name, M, a in _targets(max_size, None):
        checked += 1
        if not minion_axioms_hold(M, a, max_n):
            return False, checked, f"{name}, target {M.labels[a]}"
    return True, checked, ""


def relevant_coordinates_suite(max_size: int = 3, max_n: int = 4) -> tuple[bool, int, str]:
    """Bound, preservation under minors, nonemptiness, and the selection condition for non-regular targets."""
    checked = 0
    for name, M, a in _targets(max_size, False):
        checked += 1
        rep = relevant_coordinate_claims(M, a, max_n)
        if not rep.ok:
            return False, checked, f"{name}, target {M.labels[a]}: {rep}"
        sel = verify_selection_condition(M, a, max_n)
        if not sel.ok:
            return False, checked, f"{name}, target {M.labels[a]}: {sel.violation}"
    return True, checked, ""


def tuple_bijection(max_size: int = 3, max_arity: int = 3) -> tuple[bool, int, str]:
    checked = 0
    for name, M, a in _targets(max_size, None):
        checked += 1
        rep = verify_tuple_bijection(M, a, max_arity)
        if not rep.ok:
            return False, checked, f"{name}, target {M.labels[a]}: {rep.violation}"
    return True, checked, ""


def block_symmetric_tuples(max_size: int = 8, arities=(3, 5, 7)) -> tuple[bool, int, str]:
    checked = 0
    for name, M, a in _targets(max_size, True):
        for arity in arities:
            n = arity // 2
            b = block_symmetric_tuple(M, a, n)
            checked += 1
            if b.arity != arity or not is_block_symmetric_tuple(b, n + 1):
                return False, checked, f"{name}, target {M.labels[a]}, arity {arity}"
    return True, checked, ""


def polymorphism_constructions(arities=(3, 5)) -> tuple[bool, int, str]:
    checked = 0
    for nt in tractable_templates():
        t, psi = nt.template, nt.witness
        for arity in arities:
            n = arity // 2
            p = build_block_symmetric_poly(psi, n)
            checked += 1
            if not is_plin_polymorphism(p, arity, t):
                return False, checked, f"{nt.name}: block construction is not a polymorphism at {arity}"
            if not check_2block_symmetric(p, t.source.size, arity, p.blocks()):
                return False, checked, f"{nt.name}: block construction not block symmetric at {arity}"
            if t.is_group_template():
                q = build_alternating_poly(psi, n)
                checked += 1
                if not is_plin_polymorphism(q, arity, t):
                    return False, checked, f"{nt.name}: alternating construction is not a polymorphism"
                if not check_alternating(q, t.source.size, arity):
                    return False, checked, f"{nt.name}: alternating construction is not alternating"
    return True, checked, ""


# --------------------------------------------------------------------------- reductions


def band_laws(max_vertices: int = 3) -> tuple[bool, int, str]:
    """Idempotence, right normality, class-invariance of left factors, and the shared quotient."""
    W = build_edge_band()
    QW, _ = quotient_semilattice(W.semigroup)
    checked = 0
    for k in range(max_vertices + 1):
        for D in all_digraphs(k):
            B = build_band(D)
            S = B.semigroup
            checked += 1
            if S.size != 5 * (len(D.vertices) + 2) + len(D.edges) + 2:
                return False, checked, f"wrong size for {D}"
            if not S.is_right_normal_band():
                return False, checked, f"not a right-normal band for {D}"
            cls = S.sim_class_of
            t = S.np_table
            for s, s2 in itertools.product(S.elements, repeat=2):
                if cls[s] == cls[s2] and (t[s] != t[s2]).any():
                    return False, checked, f"left factor not class-invariant for {D}"
            try:
                SubAlgebra(S, B.planted_members(), "semigroup")
            except Exception:
                return False, checked, f"planted copy not closed for {D}"
            Q, _ = quotient_semilattice(S)
            if find_isomorphism(Q, QW) is None:
                return False, checked, f"quotient differs for {D}"
    return True, checked, ""


def _semilattices():
    W = build_edge_band()
    QW, _ = quotient_semilattice(W.semigroup)
    two = chain_semilattice(2)
    return [("chain2", two), ("chain3", chain_semilattice(3)), ("2x2", direct_product(two, two)),
            ("classes", QW)]


def semilattice_minimal_solutions(n_systems: int = 200, seed: int | None = None) -> tuple[bool, int, str]:
    """The arc-consistency answer is the unique pointwise least solution; solutions meet-close."""
    rng = random.Random(corpus_seed() if seed is None else seed)
    checked = 0
    for k in range(n_systems):
        name, L = _semilattices()[k % 4]
        nv = rng.randint(1, 4)
        vs = [f"x{i}" for i in range(nv)]
        eqs = []
        for _ in range(rng.randint(0, 5)):
            if rng.random() < 0.35:
                eqs.append(Fix(rng.choice(vs), rng.randrange(L.size)))
            else:
                eqs.append(Mul(rng.choice(vs), rng.choice(vs), rng.choice(vs)))
        sys = EquationSystem(vs, eqs)
        got = solve_semilattice_min(L, sys)
        sols = list(all_solutions(sys, L))
        checked += 1
        if not sols:
            if got is not None:
                return False, checked, f"{name}: answer for an unsolvable system"
            continue
        tab = L.table
        below = lambda s, t: tab[s][t] == s  # noqa: E731
        minimal = [s for s in sols if all(all(below(s[x], u[x]) for x in vs) for u in sols)]
        if len(minimal) != 1 or got != minimal[0]:
            return False, checked, f"{name}: answer is not the unique least solution"
        for s1, s2 in itertools.combinations(sols[:20], 2):
            meet = {x: tab[s1[x]][s2[x]] for x in vs}
            if not check_assignment(sys, L, meet):
                return False, checked, f"{name}: solutions not closed under meets"
    return True, checked, ""


def sample_instances(max_vertices: int = 4, per_size: int = 40, seed: int | None = None):
    """Every marked digraph with at most 2 vertices plus a seeded sample of larger ones."""
    rng = random.Random(corpus_seed() if seed is None else seed)
    out = [I for k in range(min(2, max_vertices) + 1) for I in all_sigma_plus(k)]
    for k in range(3, max_vertices + 1):
        out += [random_sigma_plus(rng, k) for _ in range(per_size)]
    return out


def reduction_round_trip(max_graph: int = 3, max_instance: int = 4, per_size: int = 40,
                         seed: int | None = None) -> tuple[bool, int, str]:
    """Homomorphisms and band solutions correspond, and the two translations invert each other."""
    W = build_edge_band()
    instances = sample_instances(max_instance, per_size, seed)
    checked = 0
    for I in instances:
        X = normalize(digraph_to_equations(I, W), W.semigroup, "semigroup")
        back = equations_to_digraph(X, W)
        checked += 1
        if not isinstance(back, PsiResult) or not hom_equivalent(back.structure, I):
            return False, checked, f"translation round trip fails on {I}"
    digraphs = [D for k in range(1, max_graph + 1) for D in all_digraphs(k)]
    for D in digraphs:
        rows = reduction_equivalence_check(D, D, instances)
        checked += len(rows)
        bad = [r for r in rows if not r.ok]
        if bad:
            return False, checked, f"{D}: {bad[0]}"
    return True, checked, ""


def psi_against_search(n_systems: int = 150, max_graph: int = 2, seed: int | None = None) -> tuple[bool, int, str]:
    """Random systems with planted constants: solvable over S_D iff the marked digraph maps to D+."""
    from .reduce import solve_equations_over_band  # noqa: F401
    from .eqsys import find_homomorphism
    rng = random.Random(corpus_seed() if seed is None else seed)
    W = build_edge_band()
    bands = [build_band(D) for k in range(max_graph + 1) for D in all_digraphs(k)]
    checked = 0
    for _ in range(n_systems):
        nv = rng.randint(1, 5)
        vs = [f"x{i}" for i in range(nv)]
        eqs = []
        for _ in range(rng.randint(1, 6)):
            if rng.random() < 0.7:
                eqs.append(Mul(rng.choice(vs), rng.choice(vs), rng.choice(vs)))
            else:
                eqs.append(Fix(rng.choice(vs), rng.randrange(W.semigroup.size)))
        X = EquationSystem(vs, eqs)
        res = equations_to_digraph(X, W)
        for B in bands:
            emb = B.embed_edge_band(W)
            direct = brute_force_solve(X, B.semigroup, lambda c: emb[c]) is not None
            if isinstance(res, PsiReject):
                via = False
            else:
                via = find_homomorphism(res.structure.to_structure(), B.plus.to_structure()) is not None
            checked += 1
            if direct != via:
                return False, checked, f"disagreement on {X} over {B.digraph}"
    return True, checked, ""


# --------------------------------------------------------------------------- matrix


def suites(max_size: int = 4, seed: int | None = None):
    small = min(max_size, 3)
    return [
        ("regularity equivalence", lambda: regularity_equivalence(max_size)),
        ("commuting divisor monotonicity", lambda: commuting_divisor_monotonicity(max_size)),
        ("divisibility preorders", lambda: preorder_properties(max_size)),
        ("commuting divisibility intransitive off commutative", lambda: commuting_divisibility_failures(max_size)),
        ("dichotomy cross-check", lambda: dichotomy_cross_validation(small)),
        ("group and monoid verdicts agree", lambda: group_monoid_agreement(8)),
        ("csp dichotomies", lambda: known_csp_dichotomies(8, max_size)),
        ("solver exactness", lambda: solver_exactness(20, 20, 5, seed)),
        ("minion axioms", lambda: minion_axioms(small, 3)),
        ("relevant coordinate claims", lambda: relevant_coordinates_suite(small, 4)),
        ("tuple bijection", lambda: tuple_bijection(small, 3)),
        ("block symmetric tuples", lambda: block_symmetric_tuples(max_size)),
        ("polymorphism constructions", lambda: polymorphism_constructions((3,))),
        ("band laws", lambda: band_laws(2)),
        ("semilattice minimal solutions", lambda: semilattice_minimal_solutions(60, seed)),
        ("reduction round trip", lambda: reduction_round_trip(2, 3, 10, seed)),
    ]


def run_all(max_size: int = 4, seed: int | None = None, only: list[str] | None = None) -> list[SuiteResult]:
    out = []
    for name, fn in suites(max_size, seed):
        if only and name not in only:
            continue
        try:
            out.append(_timed(name, fn))
        except BudgetExceeded as exc:
            out.append(SuiteResult(name, False, 0, f"budget exceeded: {exc}"))
    return out
