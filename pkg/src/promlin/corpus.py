"""Named algebras, template and instance corpora, and deterministic fixture generation."""
from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from functools import lru_cache

from .algebra import Group, Monoid, PartialHom, Semigroup, SubAlgebra, closure
from .classify import classify
from .eqsys import EquationSystem, Fix, Mul, PromiseTemplate, brute_force_solve
from .families import (all_monoids, chain_semilattice, cyclic_group, dihedral_group, direct_product,
                       full_transformation_monoid, groups_up_to_order, monogenic_monoid, permutation_embedding,
                       quaternion_group, symmetric_group, trivial_monoid, with_identity, with_zero)

DEFAULT_SEED = 20240917


def corpus_seed(default: int = DEFAULT_SEED) -> int:
    raw = os.environ.get("PROMLIN_SEED")
    return int(raw) if raw not in (None, "") else default


def relabel(M: Monoid, labels) -> Monoid:
    if isinstance(M, Group):
        return Group(labels, M.table, M.identity, check=False)
    return Monoid(labels, M.table, M.identity, check=False)


def m3() -> Monoid:
    """``{0, 1, eps}`` with identity 0, ``1 * 1 = eps`` and ``eps`` absorbing."""
    return relabel(monogenic_monoid(2, 1), ["0", "1", "eps"])


def z2ext() -> Monoid:
    """The two-element group with a fresh identity ``e`` adjoined."""
    return relabel(monogenic_monoid(1, 2), ["e", "1", "0"])


def d4_s4():
    """The dihedral group of the square inside ``S4``, and the two maps on the rotations."""
    D = dihedral_group(4)
    S = symmetric_group(4)
    emb = permutation_embedding(D, S)
    rot = SubAlgebra(D, closure(D, [D.labels.index("r")], "monoid"), "monoid")
    r = D.labels.index("r")
    r2 = D.labels.index("r2")
    r3 = D.labels.index("r3")
    e = D.identity
    squares = {e: emb[e], r: emb[r2], r2: emb[e], r3: emb[r2]}
    same = {m: emb[m] for m in rot.members}
    phi_square = PartialHom(D, S, rot, squares)
    phi_embed = PartialHom(D, S, rot, same)
    return D, S, phi_square, phi_embed


_SIMPLE = {
    "M3": m3,
    "Z2ext": z2ext,
    "Q8": quaternion_group,
    "T2": lambda: full_transformation_monoid(2),
    "trivial": trivial_monoid,
}


@lru_cache(maxsize=None)
def named_algebra(name: str) -> Monoid:
    """Parse names like ``Z4``, ``D4``, ``S3``, ``M3``, ``Z2ext``, ``chain3``, ``mono2.1``, ``Z2xZ2``."""
    if name in _SIMPLE:
        return _SIMPLE[name]()
    for gname, G in groups_up_to_order(8):
        if gname == name:
            return G
    if "x" in name and not name.startswith("chain"):
        parts = name.split("x")
        out = named_algebra(parts[0])
        for p in parts[1:]:
            out = direct_product(out, named_algebra(p), check=True)
        return out
    if name.startswith("Z") and name[1:].isdigit():
        return cyclic_group(int(name[1:]))
    if name.startswith("D") and name[1:].isdigit():
        return dihedral_group(int(name[1:]))
    if name.startswith("S") and name[1:].isdigit():
        n = int(name[1:])
        if n > 4:
            raise ValueError("symmetric groups are limited to degree 4")
        return symmetric_group(n)
    if name.startswith("chain") and name[5:].isdigit():
        return chain_semilattice(int(name[5:]))
    if name.startswith("mono"):
        index, period = name[4:].split(".")
        return monogenic_monoid(int(index), int(period))
    if name.startswith("T") and name[1:].isdigit():
        return full_transformation_monoid(int(name[1:]))
    raise KeyError(f"unknown algebra name {name!r}")


@lru_cache(maxsize=None)
def monoid_corpus(max_size: int = 8) -> tuple[tuple[str, Monoid], ...]:
    """Every monoid of order at most 5 plus named families up to ``max_size``."""
    out: list[tuple[str, Monoid]] = []
    for n in range(1, min(5, max_size) + 1):
        for k, M in enumerate(all_monoids(n)):
            out.append((f"mon{n}_{k}", M))
    named = [name for name, _ in groups_up_to_order(8)]
    named += ["M3", "Z2ext", "T2", "chain3", "chain5", "mono2.1", "mono3.1", "mono2.2", "mono1.4", "mono2.3",
              "mono4.1", "mono3.3", "mono1.6", "Z2xM3"]
    for name in named:
        M = named_algebra(name)
        if M.size <= max_size:
            out.append((name, M))
    extra = [("Z2xZ2+1", with_identity(direct_product(cyclic_group(2), cyclic_group(2)))),
             ("Z4+0", with_zero(cyclic_group(4))), ("S3+0", with_zero(symmetric_group(3)))]
    for name, S in extra:
        if S.size <= max_size and isinstance(S, Monoid):
            out.append((name, S))
    return tuple(out)


@dataclass
class NamedTemplate:
    name: str
    template: PromiseTemplate
    witness: PartialHom | None = None


def _csp(name: str) -> PromiseTemplate:
    return PromiseTemplate.csp(named_algebra(name))


@lru_cache(maxsize=None)
def tractable_templates() -> tuple[NamedTemplate, ...]:
    """A spread of tractable templates with their lex-least witnesses."""
    D, S, phi_square, _ = d4_s4()
    cands = [(f"Lin({n})", _csp(n)) for n in ("Z2", "Z3", "Z4", "Z2xZ2", "Z2ext", "chain3", "mono1.4")]
    cands.append(("PLin(D4,S4,r->r2)", PromiseTemplate(D, S, phi_square)))
    Z4, Z2 = named_algebra("Z4"), named_algebra("Z2")
    dom = SubAlgebra(Z4, closure(Z4, [2], "monoid"), "monoid")
    cands.append(("PLin(Z4,Z2,2->0)", PromiseTemplate(Z4, Z2, PartialHom(Z4, Z2, dom, {0: 0, 2: 0}))))
    M3 = named_algebra("M3")
    zx = named_algebra("Z2ext")
    dom3 = SubAlgebra(M3, [0, 2], "monoid")
    cands.append(("PLin(M3,Z2ext,eps->0)", PromiseTemplate(M3, zx, PartialHom(M3, zx, dom3, {0: 0, 2: 2}))))
    out = []
    for name, t in cands:
        res = classify(t)
        if not res.tractable:
            raise AssertionError(f"corpus template {name} is not tractable")
        out.append(NamedTemplate(name, t, res.witness))
    return tuple(out)


@lru_cache(maxsize=None)
def hard_templates() -> tuple[NamedTemplate, ...]:
    D, S, _, phi_embed = d4_s4()
    return (NamedTemplate("Lin(M3)", _csp("M3")), NamedTemplate("Lin(S3)", _csp("S3")),
            NamedTemplate("PLin(D4,S4,r->r)", PromiseTemplate(D, S, phi_embed)))


# --------------------------------------------------------------------------- instances


def random_instance(rng: random.Random, M: Semigroup, constants, n_vars: int, n_eqs: int,
                    fix_rate: float = 0.3) -> EquationSystem:
    vs = [f"x{i}" for i in range(n_vars)]
    constants = list(constants)
    eqs = []
    for _ in range(n_eqs):
        if constants and rng.random() < fix_rate:
            eqs.append(Fix(rng.choice(vs), rng.choice(constants)))
        else:
            eqs.append(Mul(rng.choice(vs), rng.choice(vs), rng.choice(vs)))
    return EquationSystem(vs, eqs)


def planted_instance(rng: random.Random, t: PromiseTemplate, n_vars: int, n_eqs: int,
                     fix_rate: float = 0.35) -> tuple[EquationSystem, dict[str, int]]:
    """A random instance built around a random source-side solution."""
    M = t.source
    vs = [f"x{i}" for i in range(n_vars)]
    consts = list(t.constants)
    asg = {}
    for v in vs:
        # bias towards constants so Fix equations are available
        asg[v] = rng.choice(consts) if rng.random() < 0.3 else rng.randrange(M.size)
    eqs = []
    tries = 0
    while len(eqs) < n_eqs and tries < 50 * n_eqs:
        tries += 1
        if rng.random() < fix_rate:
            x = rng.choice(vs)
            if asg[x] in consts:
                eqs.append(Fix(x, asg[x]))
            continue
        x, y = rng.choice(vs), rng.choice(vs)
        prod = M.table[asg[x]][asg[y]]
        zs = [z for z in vs if asg[z] == prod]
        if zs:
            eqs.append(Mul(x, y, rng.choice(zs)))
    return EquationSystem(vs, eqs), asg


def unsat_instance(rng: random.Random, t: PromiseTemplate, n_vars: int, n_eqs: int,
                   max_tries: int = 500) -> EquationSystem | None:
    """A random instance with no target-side solution (checked by exhaustive search)."""
    for _ in range(max_tries):
        sys = random_instance(rng, t.source, t.constants, n_vars, n_eqs, fix_rate=0.4)
        if brute_force_solve(sys, t.target, t.partial) is None:
            return sys
    return None


# --------------------------------------------------------------------------- fixture generation


@dataclass
class CorpusSpec:
    seed: int = DEFAULT_SEED
    families: list[str] = field(default_factory=lambda: ["cyclic", "dihedral", "symmetric", "products",
                                                         "adjoined", "M3", "Z2ext", "bands"])
    max_size: int = 8
    instances_per_template: int = 3
    max_vars: int = 5


def generate_corpus(spec: CorpusSpec) -> dict:
    """Plain-data fixture set: algebras, templates and planted instances."""
    from . import jsonio
    from .reduce import Digraph, build_band

    rng = random.Random(spec.seed)
    algebras: dict[str, dict] = {}
    fam = set(spec.families)
    pick = []
    if "cyclic" in fam:
        pick += [f"Z{n}" for n in range(1, 9)]
    if "dihedral" in fam:
        pick += ["D3", "D4"]
    if "symmetric" in fam:
        pick += ["S3", "S4"]
    if "products" in fam:
        pick += ["Z2xZ2", "Z2xZ4", "Z2xM3"]
    if "adjoined" in fam:
        pick += ["mono2.1", "mono1.4", "chain3"]
    if "M3" in fam:
        pick.append("M3")
    if "Z2ext" in fam:
        pick.append("Z2ext")
    for name in pick:
        M = named_algebra(name)
        if M.size <= spec.max_size or name in ("S4",):
            algebras[name] = jsonio.algebra_to_json(M)
    if "bands" in fam:
        for k, D in enumerate([Digraph((), ()), Digraph((0, 1), {(0, 1)}), Digraph((0,), {(0, 0)})]):
            algebras[f"band{k}"] = jsonio.algebra_to_json(build_band(D).semigroup)
    templates = {}
    instances = {}
    for nt in tractable_templates():
        templates[nt.name] = jsonio.template_to_json(nt.template)
        rows = []
        for _ in range(spec.instances_per_template):
            sys, _ = planted_instance(rng, nt.template, rng.randint(2, spec.max_vars), rng.randint(2, 6))
            rows.append(jsonio.system_to_json(sys, nt.template.source))
        instances[nt.name] = rows
    return {"seed": spec.seed, "algebras": algebras, "templates": templates, "instances": instances}
