"""Digraph homomorphism problems as equations over right-normal bands, and back."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .algebra import QuotientUndefined, Semigroup, SubAlgebra, quotient_semilattice
from .eqsys import (Const, EqsysError, EquationSystem, Fix, GeneralEquation, GeneralSystem, Mul,
                    RelationalStructure, Var, _Search, find_homomorphism, is_homomorphism, lin_structure,
                    normalize, system_to_structure)

TAGS = ("L", "R", "LC", "LR", "CR")
EDGE = "C"
ZERO = "0"
CLASSES = TAGS + (EDGE, ZERO)

_MEETS = {
    frozenset(("L", "R")): "LR", frozenset(("L", "LR")): "LR", frozenset(("R", "LR")): "LR",
    frozenset(("L", "LC")): "LC", frozenset(("C", "L")): "LC", frozenset(("C", "LC")): "LC",
    frozenset(("R", "CR")): "CR", frozenset(("C", "R")): "CR", frozenset(("C", "CR")): "CR",
}


def class_meet(x: str, y: str) -> str:
    if x == y:
        return x
    return _MEETS.get(frozenset((x, y)), ZERO)


class ReduceError(ValueError):
    pass


class ConstantOutsideSW(ReduceError):
    pass


class NotSemilattice(ReduceError):
    pass


# --------------------------------------------------------------------------- digraphs


@dataclass(frozen=True)
class Digraph:
    vertices: tuple
    edges: frozenset

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", frozenset(tuple(e) for e in self.edges))
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise ReduceError("duplicate vertices")
        if any(u not in vs or v not in vs for u, v in self.edges):
            raise ReduceError("edge endpoint is not a vertex")

    def to_structure(self) -> RelationalStructure:
        return RelationalStructure(self.vertices, {"E": self.edges}, {"E": 2})


@dataclass(frozen=True)
class SigmaPlus:
    """Digraph with two unary marks ``P`` and ``Q``."""
    vertices: tuple
    edges: frozenset
    P: frozenset = frozenset()
    Q: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", frozenset(tuple(e) for e in self.edges))
        object.__setattr__(self, "P", frozenset(self.P))
        object.__setattr__(self, "Q", frozenset(self.Q))
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise ReduceError("duplicate vertices")
        if any(u not in vs or v not in vs for u, v in self.edges) or not (self.P | self.Q) <= vs:
            raise ReduceError("relation member outside the vertex set")

    def to_structure(self) -> RelationalStructure:
        return RelationalStructure(
            self.vertices,
            {"E": self.edges, "P": {(v,) for v in self.P}, "Q": {(v,) for v in self.Q}},
            {"E": 2, "P": 1, "Q": 1},
        )

    def components(self) -> list[tuple]:
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.edges:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[rv] = ru
        groups: dict = {}
        for v in self.vertices:
            groups.setdefault(find(v), []).append(v)
        return [tuple(g) for g in groups.values()]

    def induced(self, keep: Iterable) -> "SigmaPlus":
        keep = set(keep)
        return SigmaPlus(tuple(v for v in self.vertices if v in keep),
                         {(u, v) for u, v in self.edges if u in keep and v in keep},
                         self.P & keep, self.Q & keep)


def fresh_names(taken: Iterable, bases=("p", "q")) -> tuple:
    taken = set(taken)
    out = []
    for b in bases:
        name = b
        while name in taken:
            name += "'"
        taken.add(name)
        out.append(name)
    return tuple(out)


def digraph_plus(D: Digraph) -> SigmaPlus:
    """Add a fresh edge ``p -> q`` with ``P = {p}`` and ``Q = {q}``."""
    p, q = fresh_names(D.vertices)
    return SigmaPlus(D.vertices + (p, q), D.edges | {(p, q)}, {p}, {q})


def edge_structure() -> SigmaPlus:
    """The single marked edge ``p -> q``."""
    return SigmaPlus(("p", "q"), {("p", "q")}, {"p"}, {"q"})


# --------------------------------------------------------------------------- the band


@dataclass(frozen=True)
class BandElement:
    tag: str  # one of TAGS, EDGE or ZERO
    payload: object = None  # vertex, edge pair, or None for zero

    def label(self) -> str:
        if self.tag == ZERO:
            return "0"
        if self.tag == EDGE:
            u, v = self.payload
            return f"({u},{v})^C"
        return f"{self.payload}^{self.tag}"


@dataclass
class DigraphBand:
    """The right-normal band built from a digraph, with the planted copy of the edge band."""
    digraph: Digraph
    plus: SigmaPlus
    p: object
    q: object
    elements: tuple[BandElement, ...]
    semigroup: Semigroup
    index: dict

    def element(self, tag: str, payload=None) -> int:
        return self.index[BandElement(tag, payload)]

    def planted_members(self) -> tuple[int, ...]:
        out = [self.element(ZERO), self.element(EDGE, (self.p, self.q))]
        for t in TAGS:
            out += [self.element(t, self.p), self.element(t, self.q)]
        return tuple(sorted(out))

    def planted(self) -> SubAlgebra:
        return SubAlgebra(self.semigroup, self.planted_members(), "semigroup")

    def embed_edge_band(self, W: "DigraphBand") -> tuple[int, ...]:
        """Index in this band of each element of the edge band ``W``."""
        out = []
        for el in W.elements:
            out.append(self.index[self._relocate(el, W)])
        return tuple(out)

    def _relocate(self, el: BandElement, W: "DigraphBand") -> BandElement:
        swap = {W.p: self.p, W.q: self.q}
        if el.tag == ZERO:
            return el
        if el.tag == EDGE:
            u, v = el.payload
            return BandElement(EDGE, (swap[u], swap[v]))
        return BandElement(el.tag, swap[el.payload])

    def class_of(self, s: int) -> str:
        return self.elements[s].tag


def band_product(x: BandElement, y: BandElement) -> BandElement:
    z = class_meet(x.tag, y.tag)
    if z == ZERO:
        return BandElement(ZERO)
    if y.tag == EDGE:
        u, v = y.payload
        if z == EDGE:
            return y
        return BandElement(z, u if z == "LC" else v)
    return BandElement(z, y.payload)


def build_band(D: Digraph) -> DigraphBand:
    plus = digraph_plus(D)
    p, q = sorted(plus.P)[0], sorted(plus.Q)[0]
    verts = plus.vertices
    edges = sorted(D.edges, key=repr) + [(p, q)]
    elements = [BandElement(t, v) for t in TAGS for v in verts]
    elements += [BandElement(EDGE, e) for e in edges]
    elements.append(BandElement(ZERO))
    index = {el: i for i, el in enumerate(elements)}
    table = [[index[band_product(x, y)] for y in elements] for x in elements]
    S = Semigroup([el.label() for el in elements], table, check=False)
    return DigraphBand(D, plus, p, q, tuple(elements), S, index)


def build_edge_band() -> DigraphBand:
    """The 12-element band of the empty digraph, which is the planted constant band."""
    return build_band(Digraph((), ()))


# --------------------------------------------------------------------------- digraphs to equations


def _phi_var(v, tag) -> str:
    return f"{v}^{tag}"


def _phi_edge_var(u, v) -> str:
    return f"({u},{v})^C"


def digraph_to_equations(I: SigmaPlus, W: DigraphBand | None = None) -> GeneralSystem:
    """Equations over the band whose solvability over ``S_D`` matches ``I -> D+``.

    Constants are indices into the edge band ``W``.
    """
    W = W or build_edge_band()
    c = lambda tag, who: Const(W.element(tag, W.p if who == "p" else W.q))  # noqa: E731
    pq = Const(W.element(EDGE, (W.p, W.q)))
    variables: list[str] = []
    eqs: list[GeneralEquation] = []
    for v in I.vertices:
        for tag in ("L", "R", "LR"):
            x = Var(_phi_var(v, tag))
            variables.append(x.name)
            eqs.append(GeneralEquation((c(tag, "p"), x), (x,)))
            eqs.append(GeneralEquation((x, c(tag, "p")), (c(tag, "p"),)))
        for tag in ("L", "R"):
            eqs.append(GeneralEquation((c("LR", "p"), Var(_phi_var(v, tag))), (Var(_phi_var(v, "LR")),)))
        for mark, who in ((I.P, "p"), (I.Q, "q")):
            if v in mark:
                for tag in ("L", "R", "LR"):
                    eqs.append(GeneralEquation((Var(_phi_var(v, tag)),), (c(tag, who),)))
    for u, v in sorted(I.edges, key=repr):
        x = Var(_phi_edge_var(u, v))
        variables.append(x.name)
        eqs.append(GeneralEquation((x, pq), (pq,)))
        eqs.append(GeneralEquation((pq, x), (x,)))
        eqs.append(GeneralEquation((c("LC", "p"), x), (c("LC", "p"), Var(_phi_var(u, "L")))))
        eqs.append(GeneralEquation((c("CR", "p"), x), (c("CR", "p"), Var(_phi_var(v, "R")))))
    return GeneralSystem(tuple(variables), eqs)


def evaluate_word(word: Sequence, S: Semigroup, asg, interpret=None) -> int:
    vals = []
    for atom in word:
        if isinstance(atom, Const):
            vals.append(interpret[atom.value] if interpret is not None else atom.value)
        else:
            vals.append(asg[atom.name])
    return S.product(vals)


def check_general(system: GeneralSystem, S: Semigroup, asg, interpret=None) -> bool:
    """Evaluate every word equation directly (no normalization)."""
    if any(v not in asg for v in system.variables):
        return False
    return all(evaluate_word(eq.lhs, S, asg, interpret) == evaluate_word(eq.rhs, S, asg, interpret)
               for eq in system.equations)


def hom_to_solution(I: SigmaPlus, h: dict, band: DigraphBand) -> dict[str, int]:
    """``v^t -> h(v)^t`` and ``(u,v)^C -> (h(u),h(v))^C``; ``h`` maps into ``D+``."""
    asg = {}
    for v in I.vertices:
        for tag in ("L", "R", "LR"):
            asg[_phi_var(v, tag)] = band.element(tag, h[v])
    for u, v in I.edges:
        asg[_phi_edge_var(u, v)] = band.element(EDGE, (h[u], h[v]))
    return asg


def solution_to_hom(I: SigmaPlus, asg: dict, band: DigraphBand) -> dict:
    """Read each vertex off the payload of its ``L`` copy."""
    h = {}
    for v in I.vertices:
        el = band.elements[asg[_phi_var(v, "L")]]
        if el.tag != "L":
            raise ReduceError(f"{v}^L is not in the L class")
        h[v] = el.payload
    return h


_TEMPLATES: dict[int, tuple] = {}


def _band_template(band: DigraphBand, W: DigraphBand) -> RelationalStructure:
    """``S_D`` with every element of ``S_W`` as a constant; cached because searches reuse it."""
    key = id(band), id(W)
    hit = _TEMPLATES.get(key)
    if hit is None or hit[0] is not band or hit[1] is not W:
        emb = band.embed_edge_band(W)
        hit = (band, W, lin_structure(band.semigroup, W.semigroup.elements, lambda c: emb[c]))
        if len(_TEMPLATES) > 256:
            _TEMPLATES.clear()
        _TEMPLATES[key] = hit
    return hit[2]


def solve_equations_over_band(system: GeneralSystem, band: DigraphBand, W: DigraphBand | None = None,
                              budget: int | None = 10 ** 6) -> dict[str, int] | None:
    """Propagating search for a solution over ``S_D`` (constants read through the planted copy)."""
    W = W or build_edge_band()
    sys = normalize(system, W.semigroup, "semigroup")
    X = system_to_structure(sys, W.semigroup.elements)
    Y = _band_template(band, W)
    h = find_homomorphism(X, Y, budget=budget)
    if h is None:
        return None
    full = sys.expand(h)
    return {v: full[v] for v in system.variables}


# --------------------------------------------------------------------------- semilattice minimal solutions


def solve_semilattice_min(L: Semigroup, sys: EquationSystem) -> dict[str, int] | None:
    """Pointwise least solution over a semilattice, or None.

    Arc consistency prunes the domains; the meet of each surviving domain
    is then a solution because solution sets are closed under meets.
    """
    if not L.is_semilattice():
        raise NotSemilattice("carrier is not idempotent and commutative")
    consts = sys.constants()
    X = system_to_structure(sys, consts)
    Y = lin_structure(L, consts)
    search = _Search(X, Y, None)
    doms = [set(d) for d in search.init_domains]
    if not search.propagate(doms, range(len(search.cons))):
        return None
    if any(not d for d in doms):
        return None
    asg = {}
    for x, d in zip(X.universe, doms):
        asg[x] = L.product(sorted(Y.universe[v] for v in d))
    from .eqsys import check_assignment
    if not check_assignment(sys, L, asg):
        raise AssertionError("meet of arc-consistent domains is not a solution")
    return asg


# --------------------------------------------------------------------------- equations to digraphs


@dataclass
class PsiReject:
    certificate: EquationSystem  # the quotient system, which has no solution
    log: list = field(default_factory=list)


@dataclass
class PsiResult:
    structure: SigmaPlus
    log: list = field(default_factory=list)


class _UF:
    def __init__(self):
        self.parent: dict = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        self.add(x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b, order=None):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if order is not None and order[rb] < order[ra]:
            ra, rb = rb, ra
        self.parent[rb] = ra


_RETAG = {"L": "L", "LC": "L", "R": "R", "LR": "R", "CR": "R", EDGE: EDGE}


def equations_to_digraph(X: EquationSystem, W: DigraphBand | None = None) -> PsiReject | PsiResult:
    """Turn a normalized system with constants in the edge band into a marked digraph.

    Either rejects (the quotient system over the semilattice of classes has
    no solution, so no band ``S_D`` solves ``X``), or returns ``I`` with
    ``X`` solvable over ``S_D`` iff ``I -> D+`` for every digraph ``D``.
    """
    W = W or build_edge_band()
    S = W.semigroup
    for c in X.constants():
        if not 0 <= c < S.size:
            raise ConstantOutsideSW(f"constant {c} is not an element of the edge band")
    log: list[tuple[str, int]] = []
    order = {x: i for i, x in enumerate(X.variables)}

    # quotient and minimal class assignment
    Q, proj = quotient_semilattice(S)
    qclass = {}
    for s in S.elements:
        qclass[proj[s]] = W.class_of(s)
    Xhat = EquationSystem(X.variables, [Fix(e.x, proj[e.c]) if isinstance(e, Fix) else e for e in X.equations])
    sol = solve_semilattice_min(Q, Xhat)
    if sol is None:
        log.append(("quotient", len(X.equations)))
        return PsiReject(Xhat, log)
    cls = {x: qclass[sol[x]] for x in X.variables}
    log.append(("quotient", len(X.variables)))
    log.append(("pin", len(X.variables)))

    # products become links c_z * y = c_z * z, tagged with the class of z
    links = []
    fixes = []
    for e in X.equations:
        if isinstance(e, Mul):
            links.append((cls[e.z], e.y, e.z))
        else:
            fixes.append((e.x, W.elements[e.c]))
    log.append(("rewrite", len(links)))

    # the zero class carries no information
    before = len(links) + len(fixes)
    links = [lk for lk in links if lk[0] != ZERO]
    fixes = [(x, el) for x, el in fixes if cls[x] != ZERO]
    live = [x for x in X.variables if cls[x] != ZERO]
    log.append(("zero", before - len(links) - len(fixes)))

    # retag LC -> L and CR, LR -> R; constants move along
    newcls = {x: _RETAG[cls[x]] for x in live}
    fixes2 = []
    for x, el in fixes:
        if el.tag == EDGE:
            fixes2.append((x, EDGE, el.payload))
        else:
            fixes2.append((x, _RETAG[el.tag], el.payload))
    log.append(("retag", sum(1 for x in live if newcls[x] != cls[x])))

    # classify links
    edge_l, edge_r, identify, lr = [], [], [], []
    for c, y, z in links:
        if y == z:
            continue
        cy, cz = cls[y], cls[z]
        if cy == "L" and cz == "LR":
            lr.append((y, z))
        elif cy == EDGE and cz == "LC":
            edge_l.append((y, z))
        elif cy == EDGE and cz == "CR":
            edge_r.append((y, z))
        elif newcls[y] == newcls[z]:
            identify.append((y, z))
        else:
            raise ReduceError(f"unexpected link between classes {cy} and {cz}")

    # a variable bound only by its class and at most one constant is always satisfiable
    linked = set()
    for a, b in identify + lr + edge_l + edge_r:
        linked.update((a, b))
    fixed_to: dict = {}
    for x, tag, payload in fixes2:
        fixed_to.setdefault(x, set()).add(payload)
    keep = [x for x in live if x in linked or len(fixed_to.get(x, ())) > 1]
    log.append(("drop_unlinked", len(live) - len(keep)))
    keep_set = set(keep)

    # expand fixed edges into their two endpoints
    counter = itertools.count()
    vertex_fix: list[tuple[str, object]] = []
    expanded = 0
    for x, tag, payload in fixes2:
        if x not in keep_set:
            continue
        if tag == EDGE:
            y, z = f"__e{next(counter)}", f"__e{next(counter)}"
            newcls[y], newcls[z] = "L", "R"
            order[y], order[z] = len(order), len(order) + 1
            keep += [y, z]
            edge_l.append((x, y))
            edge_r.append((x, z))
            vertex_fix += [(y, W.p), (z, W.q)]
            expanded += 1
        else:
            vertex_fix.append((x, payload))
    keep_set = set(keep)
    log.append(("edge_constants", expanded))
    log.append(("identify", len(identify)))

    uf = _UF()
    for a, b in identify + lr:
        uf.union(a, b, order)
    # all left (right) endpoints of one edge variable are the same vertex
    edge_uf = _UF()
    for a, b in identify:
        if newcls[a] == EDGE:
            edge_uf.union(a, b, order)
    ends_l: dict = {}
    ends_r: dict = {}
    for x, y in edge_l:
        ends_l.setdefault(edge_uf.find(x), []).append(y)
    for x, z in edge_r:
        ends_r.setdefault(edge_uf.find(x), []).append(z)
    for ends in (ends_l, ends_r):
        for ys in ends.values():
            for y in ys[1:]:
                uf.union(ys[0], y, order)

    vertices = []
    seen = set()
    rep_of = {}
    for x in keep:
        if newcls[x] == EDGE:
            continue
        r = uf.find(x)
        rep_of[x] = r
        if r not in seen:
            seen.add(r)
            vertices.append(r)
    P, Qm = set(), set()
    for x, payload in vertex_fix:
        if x not in keep_set:
            continue
        (P if payload == W.p else Qm).add(uf.find(x))
    edges = set()
    dummy = itertools.count()
    edge_reps = []
    for x in keep:
        if newcls[x] == EDGE:
            r = edge_uf.find(x)
            if r not in edge_reps:
                edge_reps.append(r)
    for r in edge_reps:
        ls, rs = ends_l.get(r), ends_r.get(r)
        if ls:
            u = uf.find(ls[0])
        else:
            u = f"__d{next(dummy)}"
            vertices.append(u)
        if rs:
            v = uf.find(rs[0])
        else:
            v = f"__d{next(dummy)}"
            vertices.append(v)
        edges.add((u, v))
    log.append(("parse", len(vertices)))
    return PsiResult(SigmaPlus(tuple(vertices), edges, P, Qm), log)


# --------------------------------------------------------------------------- the marked-edge reduction


@dataclass
class ExtendedOutcome:
    verdict: str  # "reject", "accept" or "reduced"
    digraph: Digraph | None = None


def maps_to_edge(C: SigmaPlus) -> bool:
    return find_homomorphism(C.to_structure(), edge_structure().to_structure()) is not None


def extended_digraph_reduce(I: SigmaPlus) -> ExtendedOutcome:
    """Strip the marked part of an instance, leaving a plain digraph instance."""
    comps = I.components()
    marked = [c for c in comps if set(c) & (I.P | I.Q)]
    for c in marked:
        if not maps_to_edge(I.induced(c)):
            return ExtendedOutcome("reject")
    rest = [c for c in comps if not set(c) & (I.P | I.Q)]
    rest = [c for c in rest if not maps_to_edge(I.induced(c))]
    if not rest:
        return ExtendedOutcome("accept")
    keep = set(v for c in rest for v in c)
    sub = I.induced(keep)
    return ExtendedOutcome("reduced", Digraph(sub.vertices, sub.edges))


def hom_exists(X: RelationalStructure, Y: RelationalStructure) -> bool:
    return find_homomorphism(X, Y) is not None


def hom_equivalent(A: SigmaPlus, B: SigmaPlus) -> bool:
    a, b = A.to_structure(), B.to_structure()
    return hom_exists(a, b) and hom_exists(b, a)


@dataclass
class EquivalenceRow:
    instance: SigmaPlus
    maps_to_first: bool
    first_solvable: bool
    maps_to_second: bool
    second_solvable: bool
    reduce_verdict: str
    ok: bool
    note: str = ""


def _solvable_with_witness(I: SigmaPlus, system: GeneralSystem, band: DigraphBand, W: DigraphBand):
    """Decide ``I -> D+`` by search and convert witnesses in both directions."""
    target = band.plus.to_structure()
    h = find_homomorphism(I.to_structure(), target)
    if h is not None:
        asg = hom_to_solution(I, h, band)
        if not check_general(system, band.semigroup, asg, band.embed_edge_band(W)):
            raise ReduceError("homomorphism did not give a solution")
        return True, True
    sol = solve_equations_over_band(system, band, W)
    if sol is not None:
        back = solution_to_hom(I, sol, band)
        if not is_homomorphism(back, I.to_structure(), target):
            raise ReduceError("solution did not give a homomorphism")
        return False, True
    return False, False


def reduction_equivalence_check(D1: Digraph, D2: Digraph, instances: Iterable[SigmaPlus]) -> list[EquivalenceRow]:
    W = build_edge_band()
    b1 = build_band(D1)
    b2 = b1 if D2 == D1 else build_band(D2)
    rows = []
    for I in instances:
        system = digraph_to_equations(I, W)
        m1, s1 = _solvable_with_witness(I, system, b1, W)
        m2, s2 = (m1, s1) if b2 is b1 else _solvable_with_witness(I, system, b2, W)
        ok = (not m1 or s1) and (not s2 or m2) and m1 == s1 and m2 == s2
        out = extended_digraph_reduce(I)
        note = ""
        if out.verdict == "reject" and (m1 or m2):
            ok, note = False, "rejected an instance that maps to an extended digraph"
        if out.verdict == "accept" and not (m1 and m2):
            ok, note = False, "accepted an instance that does not map"
        if out.verdict == "reduced":
            for D, m in ((D1, m1), (D2, m2)):
                if D.edges and hom_exists(out.digraph.to_structure(), D.to_structure()) != m:
                    ok, note = False, "reduced instance disagrees"
        rows.append(EquivalenceRow(I, m1, s1, m2, s2, out.verdict, ok, note))
    return rows


# --------------------------------------------------------------------------- small digraph families


def all_digraphs(n: int) -> list[Digraph]:
    """Digraphs (loops allowed) on ``n`` vertices up to isomorphism."""
    verts = tuple(range(n))
    pairs = [(u, v) for u in verts for v in verts]
    seen = set()
    out = []
    perms = list(itertools.permutations(verts))
    for mask in range(1 << len(pairs)):
        edges = frozenset(p for k, p in enumerate(pairs) if mask >> k & 1)
        canon = min(tuple(sorted((pm[u], pm[v]) for u, v in edges)) for pm in perms)
        if canon in seen:
            continue
        seen.add(canon)
        out.append(Digraph(verts, edges))
    return out


def all_sigma_plus(n: int) -> list[SigmaPlus]:
    """Marked digraphs on ``n`` vertices up to isomorphism."""
    verts = tuple(f"v{i}" for i in range(n))
    pairs = [(u, v) for u in verts for v in verts]
    perms = [dict(zip(verts, pm)) for pm in itertools.permutations(verts)]
    seen = set()
    out = []
    subsets = [frozenset(c) for k in range(n + 1) for c in itertools.combinations(verts, k)]
    for mask in range(1 << len(pairs)):
        edges = frozenset(p for k, p in enumerate(pairs) if mask >> k & 1)
        for P in subsets:
            for Qs in subsets:
                canon = min((tuple(sorted((pm[u], pm[v]) for u, v in edges)), tuple(sorted(pm[x] for x in P)),
                             tuple(sorted(pm[x] for x in Qs))) for pm in perms)
                if canon in seen:
                    continue
                seen.add(canon)
                out.append(SigmaPlus(verts, edges, P, Qs))
    return out


def random_sigma_plus(rng, n: int, edge_prob: float = 0.35, mark_prob: float = 0.15) -> SigmaPlus:
    verts = tuple(f"v{i}" for i in range(n))
    edges = {(u, v) for u in verts for v in verts if rng.random() < edge_prob}
    P = {v for v in verts if rng.random() < mark_prob}
    Qs = {v for v in verts if rng.random() < mark_prob}
    return SigmaPlus(verts, edges, P, Qs)
