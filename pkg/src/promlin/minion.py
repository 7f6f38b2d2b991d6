"""Monoidal minions, polymorphism constructions and their checks.

Coordinates and minor maps are 0-indexed throughout: a minor map of arity
``n -> m`` is a sequence ``pi`` of length ``n`` with values in ``range(m)``.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from math import lcm
from typing import Callable, Iterator, Sequence

from .algebra import (Group, Monoid, PartialHom, SubAlgebra, ab_preorder, enumerate_extending_homs,
                      generating_set, is_regular)
from .eqsys import BudgetExceeded, PromiseTemplate, RelationalStructure, homomorphisms
from .families import direct_power, power_coords, power_index

DEFAULT_BUDGET = 10 ** 6
SAMPLE_SEED = 20240917


class MinionError(ValueError):
    pass


class RegularTarget(MinionError):
    pass


class NotRegular(MinionError):
    pass


class EvenArity(MinionError):
    pass


class PreconditionFailed(MinionError):
    pass


# --------------------------------------------------------------------------- minion elements


@dataclass(frozen=True)
class MinionElement:
    """Pairwise commuting tuple over ``monoid`` whose product is ``target``."""
    monoid: Monoid = field(compare=False, repr=False)
    target: int
    entries: tuple[int, ...]

    def __post_init__(self):
        tab = self.monoid.table
        es = self.entries
        for i, x in enumerate(es):
            for y in es[i + 1:]:
                if tab[x][y] != tab[y][x]:
                    raise MinionError(f"entries {x} and {y} do not commute")
        if self.monoid.product(es) != self.target:
            raise MinionError("entries do not multiply to the target")

    @property
    def arity(self) -> int:
        return len(self.entries)

    def labels(self) -> list:
        return [self.monoid.labels[x] for x in self.entries]


def minor(b: MinionElement, pi: Sequence[int], m: int) -> MinionElement:
    """Multiply the entries of each preimage block; empty blocks give the identity."""
    if len(pi) != b.arity or any(not 0 <= j < m for j in pi):
        raise MinionError("minor map does not match the arities")
    M = b.monoid
    out = [M.identity] * m
    tab = M.table
    for i, j in enumerate(pi):
        out[j] = tab[out[j]][b.entries[i]]
    return MinionElement(M, b.target, tuple(out))


def all_maps(n: int, m: int) -> Iterator[tuple[int, ...]]:
    return itertools.product(range(m), repeat=n)


def enumerate_minion(M: Monoid, a: int, n: int, budget: int = DEFAULT_BUDGET) -> list[MinionElement]:
    if n < 1:
        raise MinionError("arity must be positive")
    if M.size ** n > budget:
        raise BudgetExceeded(f"|M|^n = {M.size ** n} exceeds the budget {budget}")
    tab = M.table
    out: list[MinionElement] = []

    def rec(prefix: list[int], prod: int):
        if len(prefix) == n:
            if prod == a:
                out.append(MinionElement(M, a, tuple(prefix)))
            return
        for x in M.elements:
            if all(tab[x][y] == tab[y][x] for y in prefix):
                prefix.append(x)
                rec(prefix, tab[prod][x])
                prefix.pop()

    rec([], M.identity)
    return out


def product_without(b: MinionElement, skip: set[int]) -> int:
    return b.monoid.product(x for i, x in enumerate(b.entries) if i not in skip)


def relevant_coordinates(b: MinionElement) -> set[int]:
    """Coordinates whose removal leaves a product strictly above the full product."""
    M, a = b.monoid, b.target
    out = set()
    for j in range(b.arity):
        rest = product_without(b, {j})
        if ab_preorder(M, a, rest) and not ab_preorder(M, rest, a):
            out.add(j)
    return out


@dataclass
class SelectionReport:
    ok: bool
    elements_checked: int = 0
    minors_checked: int = 0
    max_relevant: int = 0
    violation: str | None = None


def verify_selection_condition(M: Monoid, a: int, max_n: int, budget: int = DEFAULT_BUDGET) -> SelectionReport:
    """Relevant coordinates form a bounded selection compatible with all minors."""
    if is_regular(M, a):
        raise RegularTarget(f"{M.labels[a]!r} is regular")
    rep = SelectionReport(ok=True)
    elems = {n: enumerate_minion(M, a, n, budget) for n in range(1, max_n + 1)}
    rel = {}
    for n, es in elems.items():
        for b in es:
            I = relevant_coordinates(b)
            rel[(n, b.entries)] = I
            rep.elements_checked += 1
            rep.max_relevant = max(rep.max_relevant, len(I))
            if not 1 <= len(I) <= M.size:
                rep.ok = False
                rep.violation = f"{b.entries} has {len(I)} relevant coordinates"
                return rep
    for n, es in elems.items():
        for m in range(1, max_n + 1):
            for pi in all_maps(n, m):
                for b in es:
                    c = minor(b, pi, m)
                    rep.minors_checked += 1
                    image = {pi[i] for i in rel[(n, b.entries)]}
                    if not image & rel[(m, c.entries)]:
                        rep.ok = False
                        rep.violation = f"minor {pi} of {b.entries} loses every relevant coordinate"
                        return rep
    return rep


@dataclass
class ClaimReport:
    bound_violations: list = field(default_factory=list)      # more than |M| relevant coordinates
    preservation_violations: list = field(default_factory=list)  # a relevant coordinate not mapped to one
    empty_violations: list = field(default_factory=list)      # no relevant coordinate at all

    @property
    def ok(self) -> bool:
        return not (self.bound_violations or self.preservation_violations or self.empty_violations)


def relevant_coordinate_claims(M: Monoid, a: int, max_n: int, budget: int = DEFAULT_BUDGET) -> ClaimReport:
    """Check the size bound, preservation under minors and nonemptiness of relevant coordinates."""
    rep = ClaimReport()
    elems = {n: enumerate_minion(M, a, n, budget) for n in range(1, max_n + 1)}
    rel = {(n, b.entries): relevant_coordinates(b) for n, es in elems.items() for b in es}
    for (n, entries), I in rel.items():
        if len(I) > M.size:
            rep.bound_violations.append(entries)
        if not I:
            rep.empty_violations.append(entries)
    for n, es in elems.items():
        for m in range(1, max_n + 1):
            for pi in all_maps(n, m):
                for b in es:
                    c = minor(b, pi, m)
                    target = rel[(m, c.entries)]
                    if any(pi[i] not in target for i in rel[(n, b.entries)]):
                        rep.preservation_violations.append((b.entries, pi))
    return rep


def regularity_partner(M: Monoid, a: int) -> int | None:
    """Least ``t`` with ``a a t = a`` and ``a t = t a``."""
    tab = M.table
    a2 = tab[a][a]
    return next((t for t in M.elements if tab[a2][t] == a and tab[a][t] == tab[t][a]), None)


def block_symmetric_tuple(M: Monoid, a: int, n: int) -> MinionElement:
    """``n + 1`` copies of ``a`` followed by ``n`` copies of its regularity partner."""
    b = regularity_partner(M, a)
    if b is None:
        raise NotRegular(f"{M.labels[a]!r} is not regular")
    return MinionElement(M, a, (a,) * (n + 1) + (b,) * n)


def is_block_symmetric_tuple(b: MinionElement, first_block: int) -> bool:
    """Constant on each of the two blocks ``[0, first_block)`` and the rest."""
    e = b.entries
    return len(set(e[:first_block])) <= 1 and len(set(e[first_block:])) <= 1


# --------------------------------------------------------------------------- symbolic polymorphisms


@dataclass
class SymbolicPolymorphism:
    """A polymorphism ``source^arity -> target`` given by a formula in a homomorphism."""
    shape: str  # "block_symmetric" or "alternating"
    psi: PartialHom
    n: int
    exponent: int | None = None  # k with s^k = s on the image (block shape)

    @property
    def arity(self) -> int:
        return 2 * self.n + 1

    @property
    def source(self):
        return self.psi.source

    @property
    def target(self):
        return self.psi.target

    def __call__(self, args: Sequence[int]) -> int:
        if len(args) != self.arity:
            raise MinionError("wrong number of arguments")
        T = self.target
        tab = T.table
        acc = T.identity
        psi = self.psi.mapping
        if self.shape == "block_symmetric":
            for s in args[: self.n + 1]:
                acc = tab[acc][psi[s]]
            for s in args[self.n + 1:]:
                acc = tab[acc][T.power(psi[s], self.exponent - 2)]
            return acc
        for i, s in enumerate(args):
            g = psi[s]
            acc = tab[acc][g if i % 2 == 0 else T.inverse[g]]
        return acc

    def blocks(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return tuple(range(self.n + 1)), tuple(range(self.n + 1, self.arity))


def common_exponent(M, members) -> int:
    """Some ``k > 1`` with ``s^k = s`` for every given element (all must be regular)."""
    periods = []
    for s in members:
        seq, start = M.power_cycle(s)
        if start != 0:
            raise PreconditionFailed(f"{M.labels[s]!r} is not regular")
        periods.append(len(seq))
    return lcm(*periods) + 1 if periods else 2


def build_block_symmetric_poly(psi: PartialHom, n: int) -> SymbolicPolymorphism:
    image = psi.image.members
    if not psi.target.is_abelian(image):
        raise PreconditionFailed("image is not Abelian")
    k = common_exponent(psi.target, image)
    return SymbolicPolymorphism("block_symmetric", psi, n, k)


def build_alternating_poly(psi: PartialHom, n: int) -> SymbolicPolymorphism:
    if not isinstance(psi.source, Group) or not isinstance(psi.target, Group):
        raise PreconditionFailed("alternating construction needs groups")
    if not psi.target.is_abelian(psi.image.members):
        raise PreconditionFailed("image is not Abelian")
    return SymbolicPolymorphism("alternating", psi, n)


# --------------------------------------------------------------------------- polymorphism checks


def _argument_tuples(size: int, arity: int, per_tuple: int, budget: int, rng: random.Random | None,
                     samples: int) -> tuple[Iterator[tuple[int, ...]], bool]:
    """Every argument tuple when affordable, otherwise a seeded random sample."""
    if size ** arity * per_tuple <= budget:
        return itertools.product(range(size), repeat=arity), True
    rng = rng or random.Random(SAMPLE_SEED)
    return (tuple(rng.randrange(size) for _ in range(arity)) for _ in range(samples)), False


def is_plin_polymorphism(p: Callable, arity: int, t: PromiseTemplate, budget: int = DEFAULT_BUDGET,
                         samples: int = 20000, exhaustive_only: bool = False) -> bool:
    """Homomorphism law against generators of the power, plus ``p(s,...,s) = phi(s)``."""
    S, T = t.source, t.target
    tab1, tab2 = S.table, T.table
    e = S.identity
    gens1 = generating_set(S, (), "monoid")
    gens = []
    for i in range(arity):
        for g in gens1:
            v = [e] * arity
            v[i] = g
            gens.append(tuple(v))
    if p((e,) * arity) != T.identity:
        return False
    for s in t.constants:
        if p((s,) * arity) != t.partial(s):
            return False
    if exhaustive_only and S.size ** arity * max(len(gens), 1) > budget:
        raise BudgetExceeded("exhaustive polymorphism check exceeds the budget")
    pg = {g: p(g) for g in gens}
    xs, _ = _argument_tuples(S.size, arity, max(len(gens), 1), budget, None, samples)
    for x in xs:
        px = p(x)
        for g in gens:
            xg = tuple(tab1[a][b] for a, b in zip(x, g))
            if p(xg) != tab2[px][pg[g]]:
                return False
    return True


def _check_invariance(p: Callable, size: int, arity: int, perms: list[tuple[int, ...]], budget: int,
                      samples: int) -> bool:
    xs, _ = _argument_tuples(size, arity, max(len(perms), 1), budget, None, samples)
    for x in xs:
        px = p(x)
        for perm in perms:
            if p(tuple(x[perm[i]] for i in range(arity))) != px:
                return False
    return True


def _transpositions(block: Sequence[int], arity: int) -> list[tuple[int, ...]]:
    out = []
    for a, b in zip(block, block[1:]):
        perm = list(range(arity))
        perm[a], perm[b] = perm[b], perm[a]
        out.append(tuple(perm))
    return out


def check_alternating(p: Callable, size: int, arity: int, budget: int = DEFAULT_BUDGET,
                      samples: int = 20000) -> bool:
    """Invariant under parity-preserving permutations, and the two identification minors agree."""
    if arity % 2 == 0:
        raise EvenArity(f"arity {arity} is even")
    odd = list(range(0, arity, 2))   # 1st, 3rd, ... coordinates
    even = list(range(1, arity, 2))
    perms = _transpositions(odd, arity) + _transpositions(even, arity)
    if not _check_invariance(p, size, arity, perms, budget, samples):
        return False
    xs, _ = _argument_tuples(size, arity, 2, budget, None, samples)
    for x in xs:
        if p((x[0], x[0]) + tuple(x[2:])) != p((x[1], x[1]) + tuple(x[2:])):
            return False
    return True


def check_2block_symmetric(p: Callable, size: int, arity: int, blocks: Sequence[Sequence[int]],
                           budget: int = DEFAULT_BUDGET, samples: int = 20000) -> bool:
    if arity % 2 == 0:
        raise EvenArity(f"arity {arity} is even")
    b1, b2 = (sorted(b) for b in blocks)
    if sorted(b1 + b2) != list(range(arity)) or sorted((len(b1), len(b2))) != [arity // 2, arity // 2 + 1]:
        raise MinionError("blocks must partition the coordinates into sizes k+1 and k")
    perms = _transpositions(b1, arity) + _transpositions(b2, arity)
    return _check_invariance(p, size, arity, perms, budget, samples)


# --------------------------------------------------------------------------- equation polymorphisms as tables


@dataclass
class PolymorphismTable:
    """A polymorphism ``M1^arity -> M2`` stored by its value on every argument tuple."""
    arity: int
    size: int
    values: tuple[int, ...]  # indexed by mixed-radix position of the argument tuple

    def __call__(self, args: Sequence[int]) -> int:
        return self.values[power_index(self.size, args)]


def diagonal_homs(M: Monoid, arity: int, budget: int = DEFAULT_BUDGET) -> Iterator[PolymorphismTable]:
    """Monoid homomorphisms ``M^arity -> M`` fixing every diagonal tuple ``(s, ..., s) -> s``.

    These are exactly the polymorphisms of the equation CSP over ``M`` with
    every element available as a constant.
    """
    if M.size ** arity > budget:
        raise BudgetExceeded("power too large to enumerate")
    P = direct_power(M, arity)
    n = M.size
    diag = {power_index(n, (s,) * arity): s for s in M.elements}
    dom = SubAlgebra(P, diag, "monoid")
    partial = PartialHom(P, M, dom, diag)
    for h in enumerate_extending_homs(P, M, partial):
        yield PolymorphismTable(arity, n, tuple(h(i) for i in P.elements))


def no_alternating_certificate(M: Monoid, arity: int, budget: int = DEFAULT_BUDGET) -> bool:
    """True iff no polymorphism of the given arity is alternating (exhaustive)."""
    if arity % 2 == 0:
        raise EvenArity(f"arity {arity} is even")
    for p in diagonal_homs(M, arity, budget):
        if check_alternating(p, M.size, arity, budget=10 ** 9):
            return False
    return True


# --------------------------------------------------------------------------- free structure template


def free_structure_template(M: Monoid, a: int) -> tuple[RelationalStructure, RelationalStructure]:
    """The 1-in-3 structure with both constants, and the free structure over pairs."""
    A = RelationalStructure(
        (0, 1),
        {"R": {(1, 0, 0), (0, 1, 0), (0, 0, 1)}, "C0": {(0,)}, "C1": {(1,)}},
        {"R": 3, "C0": 1, "C1": 1},
    )
    tab = M.table
    e = M.identity
    pairs = [b.entries for b in enumerate_minion(M, a, 2)]
    R = set()
    for c1, c2, c3 in itertools.product(M.elements, repeat=3):
        if tab[c1][c2] != tab[c2][c1] or tab[c1][c3] != tab[c3][c1] or tab[c2][c3] != tab[c3][c2]:
            continue
        if tab[tab[c1][c2]][c3] != a:
            continue
        R.add(((c1, tab[c2][c3]), (c2, tab[c1][c3]), (c3, tab[c1][c2])))
    B = RelationalStructure(tuple(pairs), {"R": R, "C0": {((e, a),)}, "C1": {((a, e),)}},
                            {"R": 3, "C0": 1, "C1": 1})
    return A, B


def structure_power(A: RelationalStructure, n: int) -> RelationalStructure:
    universe = tuple(itertools.product(A.universe, repeat=n))
    rel = {}
    for name, tuples in A.relations.items():
        ar = A.signature[name]
        rows = []
        for cols in itertools.product(sorted(tuples), repeat=n):
            rows.append(tuple(tuple(col[r] for col in cols) for r in range(ar)))
        rel[name] = set(rows)
    return RelationalStructure(universe, rel, dict(A.signature))


def free_structure_polymorphisms(M: Monoid, a: int, n: int, budget: int | None = DEFAULT_BUDGET) -> list[dict]:
    """Every ``n``-ary polymorphism of the free structure template, as a map on 0/1 tuples."""
    A, B = free_structure_template(M, a)
    return list(homomorphisms(structure_power(A, n), B, budget=budget))


def polymorphism_to_tuple(p: dict, n: int, M: Monoid, a: int) -> MinionElement:
    """Read off the first component of the value at each singleton indicator."""
    entries = []
    for i in range(n):
        unit = tuple(1 if k == i else 0 for k in range(n))
        entries.append(p[unit][0])
    return MinionElement(M, a, tuple(entries))


def tuple_to_polymorphism(b: MinionElement) -> dict:
    """``X -> (product over X, product over the complement)``."""
    M, n = b.monoid, b.arity
    out = {}
    for x in itertools.product((0, 1), repeat=n):
        inside = M.product(b.entries[i] for i in range(n) if x[i])
        outside = M.product(b.entries[i] for i in range(n) if not x[i])
        out[x] = (inside, outside)
    return out


def polymorphism_minor(p: dict, pi: Sequence[int], m: int) -> dict:
    """``q(y_1..y_m) = p(y_pi(1), ..., y_pi(n))``."""
    return {y: p[tuple(y[j] for j in pi)] for y in itertools.product((0, 1), repeat=m)}


@dataclass
class BijectionReport:
    ok: bool
    counts: dict[int, tuple[int, int]] = field(default_factory=dict)  # arity -> (#polymorphisms, #elements)
    minors_checked: int = 0
    violation: str | None = None


def verify_tuple_bijection(M: Monoid, a: int, max_arity: int, budget: int | None = DEFAULT_BUDGET) -> BijectionReport:
    """Polymorphisms of the free structure template correspond to minion elements, minors included."""
    rep = BijectionReport(ok=True)
    A, B = free_structure_template(M, a)
    polys = {}
    tab = M.table

    def fail(msg):
        rep.ok = False
        rep.violation = msg
        return rep

    for n in range(1, max_arity + 1):
        ps = list(homomorphisms(structure_power(A, n), B, budget=budget))
        elems = enumerate_minion(M, a, n)
        try:
            images = [polymorphism_to_tuple(p, n, M, a) for p in ps]
        except MinionError as exc:
            return fail(f"arity {n}: image is not a minion element ({exc})")
        rep.counts[n] = (len(ps), len(elems))
        if len({b.entries for b in images}) != len(ps):
            return fail(f"arity {n}: two polymorphisms share an image")
        if {b.entries for b in images} != {b.entries for b in elems}:
            return fail(f"arity {n}: images differ from the minion elements")
        for b in elems:
            q = tuple_to_polymorphism(b)
            if q not in ps or polymorphism_to_tuple(q, n, M, a).entries != b.entries:
                return fail(f"arity {n}: {b.entries} has no matching polymorphism")
        for p in ps:
            for x in p:
                comp = tuple(1 - v for v in x)
                if p[comp] != (p[x][1], p[x][0]):
                    return fail(f"arity {n}: complement value is not the swapped pair")
            for x in p:
                for y in p:
                    if any(u and v for u, v in zip(x, y)):
                        continue
                    union = tuple(u | v for u, v in zip(x, y))
                    if p[union][0] != tab[p[x][0]][p[y][0]]:
                        return fail(f"arity {n}: first components do not multiply over a disjoint union")
        polys[n] = list(zip(ps, images))
    for n, items in polys.items():
        for m in range(1, max_arity + 1):
            for pi in all_maps(n, m):
                for p, b in items:
                    q = polymorphism_minor(p, pi, m)
                    rep.minors_checked += 1
                    if polymorphism_to_tuple(q, m, M, a).entries != minor(b, pi, m).entries:
                        return fail(f"minor {pi} not preserved for {b.entries}")
    return rep


def minion_axioms_hold(M: Monoid, a: int, max_n: int, budget: int = DEFAULT_BUDGET) -> bool:
    """Identity minors are trivial and minors compose, on every element up to ``max_n``."""
    elems = {n: enumerate_minion(M, a, n, budget) for n in range(1, max_n + 1)}
    for n, es in elems.items():
        ident = tuple(range(n))
        for b in es:
            if minor(b, ident, n) != b:
                return False
        for m in range(1, max_n + 1):
            for k in range(1, max_n + 1):
                for tau in all_maps(n, m):
                    for pi in all_maps(m, k):
                        comp = tuple(pi[tau[i]] for i in range(n))
                        for b in es:
                            if minor(minor(b, tau, m), pi, k) != minor(b, comp, k):
                                return False
    return True
