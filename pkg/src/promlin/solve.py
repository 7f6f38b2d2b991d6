"""Search versions: finding actual solutions of instances of tractable templates."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .algebra import AlgebraError, Group, Monoid, PartialHom
from .eqsys import (EquationSystem, Fix, Mul, PromiseTemplate, brute_force_solve, check_assignment,
                    check_promise_solution, lin_structure, system_to_structure)
from .lattice import integer_solution, lattice_basis
from .relax import decide_aip, decide_blp_aip

BLP_AIP_PATH = "blp_aip_selfreduce"
AIP_PATH = "aip_selfreduce"
GROUP_PATH = "aip_group_direct"
BRUTE_PATH = "brute_force"


class SolveError(RuntimeError):
    pass


class PromiseViolated(SolveError):
    """No value survives for some variable, so the instance was not source-satisfiable."""


class NotAbelian(ValueError):
    pass


@dataclass
class SolveReport:
    assignment: dict[str, int]
    decisions_used: int
    path: str
    trace: list[tuple[str, int]] = field(default_factory=list)


def translate_to_image(instance: EquationSystem, psi: PartialHom):
    """Rewrite constants ``c`` as ``psi(c)``, in local indices of the image monoid."""
    M, emb = psi.image.as_algebra()
    if isinstance(M, Monoid) and not isinstance(M, Group):
        # the image of a group is a group even when the domain was declared a monoid
        try:
            M = Group(M.labels, M.table, M.identity, check=False)
        except AlgebraError:
            pass
    pos = {g: i for i, g in enumerate(emb)}
    eqs = [Fix(eq.x, pos[psi(eq.c)]) if isinstance(eq, Fix) else eq for eq in instance.equations]
    return M, emb, EquationSystem(instance.variables, eqs)


def self_reduce(sys: EquationSystem, M, decide: Callable, values=None) -> tuple[dict[str, int] | None, int, list]:
    """Pin variables one at a time to the least value the decision procedure still accepts."""
    consts = list(M.elements)
    A = lin_structure(M, consts)
    decisions = 1
    if not decide(system_to_structure(sys, consts), A):
        return None, decisions, []
    asg: dict[str, int] = {}
    trace = []
    cur = sys
    for x in sys.variables:
        chosen = None
        for v in (values or M.elements):
            trial = cur.with_equations([Fix(x, v)])
            decisions += 1
            if decide(system_to_structure(trial, consts), A):
                chosen = v
                cur = trial
                break
        if chosen is None:
            return None, decisions, trace
        asg[x] = chosen
        trace.append((x, chosen))
    return asg, decisions, trace


def solve_promise(t: PromiseTemplate, instance: EquationSystem, psi: PartialHom,
                  engine: str = "blp-aip") -> SolveReport:
    """Solve over ``im(psi)`` with every element available as a constant."""
    if engine == "brute":
        sol = brute_force_solve(instance, t.target, t.partial)
        if sol is None:
            raise PromiseViolated("no solution over the target side")
        return SolveReport(sol, 0, BRUTE_PATH)
    M, emb, local = translate_to_image(instance, psi)
    if engine == "group-direct":
        sol = solve_abelian_group_system(M, local)
        if sol is None:
            raise PromiseViolated("translated system has no solution over the image")
        asg = {x: emb[v] for x, v in sol.items()}
        path, decisions, trace = GROUP_PATH, 0, []
    else:
        decide = {"blp-aip": decide_blp_aip, "aip": decide_aip}.get(engine)
        if decide is None:
            raise ValueError(f"unknown engine {engine!r}")
        sol, decisions, trace = self_reduce(local, M, decide)
        if sol is None:
            raise PromiseViolated(f"decision procedure rejected after {decisions} calls")
        asg = {x: emb[v] for x, v in sol.items()}
        path = BLP_AIP_PATH if engine == "blp-aip" else AIP_PATH
    if not check_promise_solution(t, instance, asg):
        raise SolveError("final assignment failed verification")
    return SolveReport(asg, decisions, path, [(x, emb[v]) for x, v in trace])


# --------------------------------------------------------------------------- abelian groups


def _relation_lattice(G: Group) -> list[list[int]]:
    """Basis of the kernel of ``Z^G -> G``: spanned by ``e_g + e_h - e_gh``."""
    n = G.size
    gens = []
    for g in G.elements:
        for h in G.elements:
            v = [0] * n
            v[g] += 1
            v[h] += 1
            v[G.table[g][h]] -= 1
            gens.append(v)
    return lattice_basis(gens, n)


def _group_feasible(G: Group, sys: EquationSystem, basis) -> bool:
    """Integer feasibility of the system lifted to ``Z^G`` modulo the relation lattice."""
    n = G.size
    r = len(basis)
    var_pos = {x: i for i, x in enumerate(sys.variables)}
    nv = len(sys.variables) * n
    ncols = nv + r * len(sys.equations)
    rows, rhs = [], []
    for k, eq in enumerate(sys.equations):
        w0 = nv + k * r
        for coord in range(n):
            row = [0] * ncols
            if isinstance(eq, Mul):
                for name, sign in ((eq.x, 1), (eq.y, 1), (eq.z, -1)):
                    row[var_pos[name] * n + coord] += sign
                b = 0
            else:
                row[var_pos[eq.x] * n + coord] += 1
                b = 1 if coord == eq.c else 0
            for j, vec in enumerate(basis):
                row[w0 + j] -= vec[coord]
            rows.append(row)
            rhs.append(b)
    return integer_solution(rows, rhs, ncols) is not None


def solve_abelian_group_system(G: Group, sys: EquationSystem) -> dict[str, int] | None:
    """Lexicographically least solution over an Abelian group, by integer linear algebra."""
    if not isinstance(G, Group) or not G.is_abelian():
        raise NotAbelian("direct solving needs an Abelian group")
    basis = _relation_lattice(G)
    if not _group_feasible(G, sys, basis):
        return None
    cur = sys
    asg = {}
    for x in sys.variables:
        for v in G.elements:
            trial = cur.with_equations([Fix(x, v)])
            if _group_feasible(G, trial, basis):
                asg[x] = v
                cur = trial
                break
        else:
            raise SolveError("self-reduction lost feasibility")
    if not check_assignment(sys, G, asg):
        raise SolveError("group solution failed verification")
    return asg


# --------------------------------------------------------------------------- cross checking


@dataclass
class CrossCheckReport:
    source_satisfiable: bool
    target_satisfiable: bool
    answers: dict[str, bool]
    excluded: list[str]
    discrepancies: list[str]

    @property
    def ok(self) -> bool:
        return not self.discrepancies


def cross_check(t: PromiseTemplate, instance: EquationSystem, psi: PartialHom | None = None,
                aip_exact: bool | None = None) -> CrossCheckReport:
    """Run every applicable decision path and compare them under the promise.

    Answers must be "yes" when the source side is satisfiable and "no" when
    the target side is not; in between, any answer is allowed.
    """
    src = brute_force_solve(instance, t.source) is not None
    tgt = brute_force_solve(instance, t.target, t.partial) is not None
    consts = t.constants
    X = system_to_structure(instance, consts)
    A = t.a_structure()
    answers = {"brute_force": tgt, "blp_aip": decide_blp_aip(X, A), "aip": decide_aip(X, A)}
    if aip_exact is None:
        aip_exact = t.is_group_template()
    excluded = [] if aip_exact else ["aip"]
    if psi is not None:
        try:
            solve_promise(t, instance, psi)
            answers["blp_aip_selfreduce"] = True
        except PromiseViolated:
            answers["blp_aip_selfreduce"] = False
        M, _, local = translate_to_image(instance, psi)
        if isinstance(M, Group) and M.is_abelian():
            answers[GROUP_PATH] = solve_abelian_group_system(M, local) is not None
    discrepancies = []
    for name, ans in answers.items():
        if name in excluded:
            continue
        if src and not ans:
            discrepancies.append(f"{name} rejected a source-satisfiable instance")
        if not tgt and ans:
            discrepancies.append(f"{name} accepted an instance with no target solution")
    return CrossCheckReport(src, tgt, answers, excluded, discrepancies)
