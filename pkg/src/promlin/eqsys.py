"""Equation systems over finite algebras and their relational-structure view.

The canonical instance form is an :class:`EquationSystem` whose equations are
``Mul(x, y, z)`` (``x*y = z``) and ``Fix(x, c)`` (``x = c``). Constants are
element indices of the *source* algebra of a template; the target side reads
them through the template's partial homomorphism.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .algebra import Group, Monoid, PartialHom, Semigroup, SubAlgebra, enumerate_extending_homs

FRESH_PREFIX = "__n"


class EqsysError(ValueError):
    pass


class InvalidAtom(EqsysError):
    pass


class BudgetExceeded(RuntimeError):
    pass


# --------------------------------------------------------------------------- general equations


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class InvVar:
    name: str


@dataclass(frozen=True)
class Const:
    value: int


Atom = Var | InvVar | Const


@dataclass(frozen=True)
class GeneralEquation:
    lhs: tuple
    rhs: tuple

    def __post_init__(self):
        if not self.lhs or not self.rhs:
            raise EqsysError("equation sides must be nonempty words")


@dataclass
class GeneralSystem:
    variables: tuple[str, ...]
    equations: list[GeneralEquation]

    def __post_init__(self):
        self.variables = tuple(self.variables)
        known = set(self.variables)
        for eq in self.equations:
            for atom in eq.lhs + eq.rhs:
                if isinstance(atom, (Var, InvVar)) and atom.name not in known:
                    raise EqsysError(f"undeclared variable {atom.name!r}")


# --------------------------------------------------------------------------- canonical systems


@dataclass(frozen=True)
class Mul:
    x: str
    y: str
    z: str


@dataclass(frozen=True)
class Fix:
    x: str
    c: int


Equation = Mul | Fix


@dataclass
class EquationSystem:
    variables: tuple[str, ...]
    equations: list
    # variables merged away by normalization: name -> surviving representative
    aliases: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        self.variables = tuple(self.variables)
        self.equations = list(self.equations)
        if len(set(self.variables)) != len(self.variables):
            raise EqsysError("duplicate variable names")
        known = set(self.variables)
        for eq in self.equations:
            names = (eq.x, eq.y, eq.z) if isinstance(eq, Mul) else (eq.x,)
            for v in names:
                if v not in known:
                    raise EqsysError(f"equation mentions undeclared variable {v!r}")

    def constants(self) -> set[int]:
        return {eq.c for eq in self.equations if isinstance(eq, Fix)}

    def with_equations(self, extra: Iterable) -> "EquationSystem":
        return EquationSystem(self.variables, self.equations + list(extra), dict(self.aliases))

    def expand(self, asg: Mapping[str, int]) -> dict[str, int]:
        """Extend a solution to the variables that were merged away."""
        out = dict(asg)
        for name, rep in self.aliases.items():
            out[name] = asg[rep]
        return out

    def validate_constants(self, constants: SubAlgebra) -> None:
        bad = self.constants() - set(constants.members)
        if bad:
            raise EqsysError(f"constants {sorted(bad)} outside the constant sub-algebra")


def normalize(system: GeneralSystem, algebra: Semigroup, mode: str | None = None,
              constants: SubAlgebra | None = None) -> EquationSystem:
    """Rewrite arbitrary word equations into ``Mul``/``Fix`` form.

    Every constant becomes a fresh variable pinned by ``Fix``; inverted
    variables (group mode only) become a fresh ``y`` with ``x*y = w, w = e``.
    Long words are multiplied out left to right through fresh variables.
    """
    mode = mode or algebra.kind
    if mode not in ("semigroup", "monoid", "group"):
        raise EqsysError(f"unknown mode {mode!r}")
    if mode == "group" and not isinstance(algebra, Group):
        raise EqsysError("group mode needs a group")
    allowed = set(constants.members) if constants is not None else set(algebra.elements)

    counter = [0]
    fresh_vars: list[str] = []
    taken = set(system.variables)

    def fresh() -> str:
        while True:
            name = f"{FRESH_PREFIX}{counter[0]}"
            counter[0] += 1
            if name not in taken:
                taken.add(name)
                fresh_vars.append(name)
                parent[name] = name
                order[name] = len(order)
                return name

    parent = {v: v for v in system.variables}
    order = {v: i for i, v in enumerate(system.variables)}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra == rb:
            return
        if order[rb] < order[ra]:
            ra, rb = rb, ra
        parent[rb] = ra

    out: list = []
    inverse_cache: dict[str, str] = {}
    const_cache: dict[int, str] = {}

    def atom_var(atom) -> str:
        if isinstance(atom, Var):
            return atom.name
        if isinstance(atom, InvVar):
            if mode != "group":
                raise InvalidAtom(f"inverted variable {atom.name!r} outside group mode")
            if atom.name not in inverse_cache:
                y, w = fresh(), fresh()
                out.append(Mul(atom.name, y, w))
                out.append(Fix(w, algebra.identity))
                inverse_cache[atom.name] = y
            return inverse_cache[atom.name]
        if isinstance(atom, Const):
            if atom.value not in allowed:
                raise EqsysError(f"constant {atom.value} is not an allowed constant")
            if atom.value not in const_cache:
                v = fresh()
                out.append(Fix(v, atom.value))
                const_cache[atom.value] = v
            return const_cache[atom.value]
        raise InvalidAtom(f"unknown atom {atom!r}")

    def chain(names: list[str], target: str | None) -> str:
        acc = names[0]
        for i, nxt in enumerate(names[1:], start=2):
            last = i == len(names)
            dest = target if (last and target is not None) else fresh()
            out.append(Mul(acc, nxt, dest))
            acc = dest
        return acc

    for eq in system.equations:
        lhs, rhs = eq.lhs, eq.rhs
        if len(lhs) == 1 and len(rhs) == 1:
            a, b = lhs[0], rhs[0]
            if isinstance(a, Const) and isinstance(b, Const):
                if a.value not in allowed or b.value not in allowed:
                    raise EqsysError("constant outside the allowed constants")
                if a.value != b.value:
                    v = fresh()
                    out.extend([Fix(v, a.value), Fix(v, b.value)])
                continue
            if isinstance(b, Const):
                a, b = b, a
            if isinstance(a, Const) and isinstance(b, Var):
                if a.value not in allowed:
                    raise EqsysError("constant outside the allowed constants")
                out.append(Fix(b.name, a.value))
                continue
            if isinstance(a, Var) and isinstance(b, Var):
                union(a.name, b.name)
                continue
        left = [atom_var(a) for a in lhs]
        right = [atom_var(a) for a in rhs]
        if len(left) == 1 and len(right) == 1:
            union(left[0], right[0])
        elif len(left) == 1:
            chain(right, left[0])
        elif len(right) == 1:
            chain(left, right[0])
        else:
            w = chain(left, None)
            chain(right, w)

    def rep(v):
        return find(v) if v in parent else v

    eqs = []
    for eq in out:
        if isinstance(eq, Mul):
            eqs.append(Mul(rep(eq.x), rep(eq.y), rep(eq.z)))
        else:
            eqs.append(Fix(rep(eq.x), eq.c))
    aliases = {v: find(v) for v in system.variables if find(v) != v}
    variables = [v for v in system.variables if find(v) == v] + [v for v in fresh_vars if find(v) == v]
    return EquationSystem(variables, eqs, aliases)


_ATOM_RE = re.compile(r"^(c:(?P<const>.+)|(?P<inv>[A-Za-z_][\w]*)\^-1|(?P<var>[A-Za-z_][\w]*))$")


def parse_general(text: str, algebra: Semigroup) -> GeneralSystem:
    """Parse lines like ``x1 c:a x2 = c:b``; ``x^-1`` inverts a variable."""
    variables: list[str] = []
    equations = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.count("=") != 1:
            raise EqsysError(f"line {lineno}: expected exactly one '='")
        sides = []
        for side in line.split("="):
            atoms = []
            for tok in side.split():
                m = _ATOM_RE.match(tok)
                if not m:
                    raise EqsysError(f"line {lineno}: bad token {tok!r}")
                if m.group("const") is not None:
                    try:
                        atoms.append(Const(algebra.index(m.group("const"))))
                    except KeyError as exc:
                        raise EqsysError(f"line {lineno}: {exc}") from None
                    continue
                name = m.group("inv") or m.group("var")
                if name not in variables:
                    variables.append(name)
                atoms.append(InvVar(name) if m.group("inv") else Var(name))
            if not atoms:
                raise EqsysError(f"line {lineno}: empty side")
            sides.append(tuple(atoms))
        equations.append(GeneralEquation(sides[0], sides[1]))
    return GeneralSystem(tuple(variables), equations)


# --------------------------------------------------------------------------- relational structures


@dataclass
class RelationalStructure:
    universe: tuple
    relations: dict[str, frozenset]
    signature: dict[str, int]

    def __post_init__(self):
        self.universe = tuple(self.universe)
        self.relations = {k: frozenset(tuple(t) for t in v) for k, v in self.relations.items()}
        members = set(self.universe)
        if set(self.relations) != set(self.signature):
            raise EqsysError("relations do not match the signature")
        for name, tuples in self.relations.items():
            ar = self.signature[name]
            for t in tuples:
                if len(t) != ar:
                    raise EqsysError(f"tuple {t} in {name} has wrong arity")
                if any(x not in members for x in t):
                    raise EqsysError(f"tuple {t} in {name} leaves the universe")

    def size(self) -> int:
        return len(self.universe)


def fix_symbol(c: int) -> str:
    return f"fix:{c}"


def system_to_structure(sys: EquationSystem, constants: Iterable[int]) -> RelationalStructure:
    constants = sorted(set(constants))
    rel: dict[str, set] = {"mul": set()}
    sig = {"mul": 3}
    for c in constants:
        rel[fix_symbol(c)] = set()
        sig[fix_symbol(c)] = 1
    for eq in sys.equations:
        if isinstance(eq, Mul):
            rel["mul"].add((eq.x, eq.y, eq.z))
        else:
            if fix_symbol(eq.c) not in rel:
                raise EqsysError(f"constant {eq.c} is not in the declared constants")
            rel[fix_symbol(eq.c)].add((eq.x,))
    return RelationalStructure(sys.variables, rel, sig)


def structure_to_system(X: RelationalStructure) -> EquationSystem:
    eqs: list = [Mul(*t) for t in sorted(X.relations.get("mul", ()), key=repr)]
    for name in sorted(X.relations):
        if name.startswith("fix:"):
            c = int(name[4:])
            eqs.extend(Fix(t[0], c) for t in sorted(X.relations[name], key=repr))
        elif name != "mul":
            raise EqsysError(f"relation {name!r} has no equation reading")
    return EquationSystem(X.universe, eqs)


def lin_structure(S: Semigroup, constants: Iterable[int], interpret: Callable[[int], int] | None = None
                  ) -> RelationalStructure:
    """The template structure: the multiplication graph plus one singleton per constant."""
    tab = S.table
    rel = {"mul": {(a, b, tab[a][b]) for a in S.elements for b in S.elements}}
    sig = {"mul": 3}
    for c in sorted(set(constants)):
        rel[fix_symbol(c)] = {((interpret(c) if interpret else c),)}
        sig[fix_symbol(c)] = 1
    return RelationalStructure(tuple(S.elements), rel, sig)


# --------------------------------------------------------------------------- homomorphism search


def _indexed_relation(Y: RelationalStructure, name: str, ypos: dict):
    """Sorted tuples of a relation in position form, plus a (coordinate, value) index; cached on ``Y``."""
    cache = Y.__dict__.setdefault("_search_index", {})
    if name not in cache:
        tuples = sorted(tuple(ypos[v] for v in t) for t in Y.relations.get(name, ()))
        index: list[dict] = [{} for _ in range(Y.signature[name])]
        for t in tuples:
            for k, val in enumerate(t):
                index[k].setdefault(val, []).append(t)
        cache[name] = (tuples, index)
    return cache[name]


class _Search:
    """Backtracking with generalized arc consistency.

    Variables are assigned in universe order and values tried in the target's
    universe order, so the first homomorphism found is the lexicographically
    least one.
    """

    def __init__(self, X: RelationalStructure, Y: RelationalStructure, budget: int | None,
                 fixed: Mapping | None = None):
        self.X, self.Y = X, Y
        self.budget = budget
        self.nodes = 0
        self.xpos = {x: i for i, x in enumerate(X.universe)}
        self.ypos = {y: i for i, y in enumerate(Y.universe)}
        self.n = len(X.universe)
        self.m = len(Y.universe)
        self.cons: list[tuple[tuple[int, ...], list[tuple[int, ...]], list[dict]]] = []
        for name, tuples in X.relations.items():
            if name not in Y.relations:
                if tuples:
                    raise EqsysError(f"target lacks relation {name!r}")
                continue
            ytuples, index = _indexed_relation(Y, name, self.ypos)
            for t in tuples:
                scope = tuple(self.xpos[v] for v in t)
                self.cons.append((scope, ytuples, index))
        self.watch: list[list[int]] = [[] for _ in range(self.n)]
        for ci, (scope, _, _) in enumerate(self.cons):
            for v in set(scope):
                self.watch[v].append(ci)
        self.init_domains = [set(range(self.m)) for _ in range(self.n)]
        if fixed:
            for x, y in fixed.items():
                self.init_domains[self.xpos[x]] &= {self.ypos[y]}

    def propagate(self, doms, queue) -> bool:
        pending = set(queue)
        queue = list(queue)
        while queue:
            ci = queue.pop()
            pending.discard(ci)
            scope, tuples, index = self.cons[ci]
            supported = [set() for _ in scope]
            # scan only tuples that agree with the smallest domain in the scope
            pivot = min(range(len(scope)), key=lambda k: len(doms[scope[k]]))
            if len(doms[scope[pivot]]) < self.m:
                cands = [t for val in doms[scope[pivot]] for t in index[pivot].get(val, ())]
            else:
                cands = tuples
            for t in cands:
                ok = True
                for k, v in enumerate(scope):
                    if t[k] not in doms[v]:
                        ok = False
                        break
                if not ok:
                    continue
                # repeated variables in the scope must take equal values
                seen = {}
                for k, v in enumerate(scope):
                    if seen.setdefault(v, t[k]) != t[k]:
                        ok = False
                        break
                if ok:
                    for k in range(len(scope)):
                        supported[k].add(t[k])
            changed = set()
            for k, v in enumerate(scope):
                new = doms[v] & supported[k]
                if len(new) < len(doms[v]):
                    if not new:
                        return False
                    doms[v] = new
                    changed.add(v)
            for v in changed:
                for cj in self.watch[v]:
                    if cj != ci and cj not in pending:
                        pending.add(cj)
                        queue.append(cj)
        return True

    def run(self) -> Iterator[list[int]]:
        doms = [set(d) for d in self.init_domains]
        if any(not d for d in doms):
            return
        if not self.propagate(doms, range(len(self.cons))):
            return
        yield from self._dfs(doms, 0)

    def _dfs(self, doms, i):
        if i == self.n:
            yield [next(iter(d)) for d in doms]
            return
        for val in sorted(doms[i]):
            self.nodes += 1
            if self.budget is not None and self.nodes > self.budget:
                raise BudgetExceeded(f"search exceeded {self.budget} nodes")
            nd = [set(d) for d in doms]
            nd[i] = {val}
            if self.propagate(nd, self.watch[i]):
                yield from self._dfs(nd, i + 1)


def homomorphisms(X: RelationalStructure, Y: RelationalStructure, *, budget: int | None = None,
                  fixed: Mapping | None = None) -> Iterator[dict]:
    """All homomorphisms ``X -> Y`` in lexicographic order (by universe orders)."""
    if X.signature and Y.signature:
        for name, ar in X.signature.items():
            if name in Y.signature and Y.signature[name] != ar:
                raise EqsysError(f"arity mismatch on {name!r}")
    s = _Search(X, Y, budget, fixed)
    for vals in s.run():
        yield {x: Y.universe[v] for x, v in zip(X.universe, vals)}


def find_homomorphism(X: RelationalStructure, Y: RelationalStructure, *, budget: int | None = None,
                      fixed: Mapping | None = None) -> dict | None:
    return next(homomorphisms(X, Y, budget=budget, fixed=fixed), None)


def is_homomorphism(h: Mapping, X: RelationalStructure, Y: RelationalStructure) -> bool:
    if set(h) != set(X.universe):
        return False
    for name, tuples in X.relations.items():
        target = Y.relations.get(name, frozenset())
        for t in tuples:
            if tuple(h[v] for v in t) not in target:
                return False
    return True


# --------------------------------------------------------------------------- checking and solving


def check_assignment(sys: EquationSystem, over: Semigroup, asg: Mapping[str, int],
                     interpret: Callable[[int], int] | None = None) -> bool:
    if any(v not in asg for v in sys.variables):
        return False
    tab = over.table
    for eq in sys.equations:
        if isinstance(eq, Mul):
            if tab[asg[eq.x]][asg[eq.y]] != asg[eq.z]:
                return False
        else:
            want = interpret(eq.c) if interpret else eq.c
            if asg[eq.x] != want:
                return False
    return True


def brute_force_solve(sys: EquationSystem, over: Semigroup, interpret: Callable[[int], int] | None = None,
                      *, budget: int | None = 10 ** 6) -> dict[str, int] | None:
    """Lexicographically least solution (variables in system order), or None."""
    consts = sys.constants()
    X = system_to_structure(sys, consts)
    Y = lin_structure(over, consts, interpret)
    return find_homomorphism(X, Y, budget=budget)


def all_solutions(sys: EquationSystem, over: Semigroup, interpret: Callable[[int], int] | None = None,
                  *, budget: int | None = 10 ** 6) -> Iterator[dict[str, int]]:
    consts = sys.constants()
    return homomorphisms(system_to_structure(sys, consts), lin_structure(over, consts, interpret), budget=budget)


# --------------------------------------------------------------------------- templates


@dataclass
class PromiseTemplate:
    """Promise template given by two monoids and a partial homomorphism.

    Constants of instances are elements of ``partial.domain``; the source side
    reads them literally and the target side through ``partial``.
    """
    source: Semigroup
    target: Semigroup
    partial: PartialHom

    def __post_init__(self):
        if self.partial.source is not self.source and self.partial.source != self.source:
            raise EqsysError("partial map does not start at the source algebra")
        if self.partial.target is not self.target and self.partial.target != self.target:
            raise EqsysError("partial map does not land in the target algebra")

    @property
    def constants(self) -> tuple[int, ...]:
        return self.partial.domain.members

    def a_structure(self) -> RelationalStructure:
        return lin_structure(self.source, self.constants)

    def b_structure(self) -> RelationalStructure:
        return lin_structure(self.target, self.constants, self.partial)

    def is_well_formed(self) -> bool:
        return next(enumerate_extending_homs(self.source, self.target, self.partial), None) is not None

    def is_group_template(self) -> bool:
        return isinstance(self.source, Group) and isinstance(self.target, Group)

    @classmethod
    def csp(cls, M: Monoid, constants: SubAlgebra | None = None) -> "PromiseTemplate":
        """``Lin(M, N)`` as the promise template ``(M, M, id_N)``."""
        return cls(M, M, PartialHom.identity_on(M, constants or SubAlgebra.whole(M)))


def check_promise_solution(template: PromiseTemplate, sys: EquationSystem, asg: Mapping[str, int]) -> bool:
    if not set(sys.constants()) <= set(template.constants):
        return False
    return check_assignment(sys, template.target, asg, template.partial)


def source_solution(template: PromiseTemplate, sys: EquationSystem, *, budget: int | None = 10 ** 6):
    return brute_force_solve(sys, template.source, budget=budget)


def target_solution(template: PromiseTemplate, sys: EquationSystem, *, budget: int | None = 10 ** 6):
    return brute_force_solve(sys, template.target, template.partial, budget=budget)
