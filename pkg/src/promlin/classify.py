"""Tractability classification of promise templates over monoids and groups."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .algebra import (Group, Monoid, PartialHom, SubAlgebra, enumerate_extending_homs, is_regular)
from .eqsys import PromiseTemplate, RelationalStructure, fix_symbol, is_homomorphism

DEFAULT_OBSTRUCTION_CAP = 1000


class Verdict(str, Enum):
    TRACTABLE = "Tractable"
    NP_HARD = "NPHard"
    ILL_FORMED = "IllFormedTemplate"


class ClassifyError(ValueError):
    pass


@dataclass(frozen=True)
class Obstruction:
    hom: PartialHom
    reason: str  # "NonAbelianImage" or "NonRegularImageElement"
    element: int | None = None


@dataclass
class ClassificationResult:
    verdict: Verdict
    witness: PartialHom | None = None
    obstructions: list[Obstruction] = field(default_factory=list)
    truncated: bool = False
    hom_count: int = 0
    algorithm_note: str | None = None

    @property
    def tractable(self) -> bool:
        return self.verdict is Verdict.TRACTABLE


def diagnose(psi: PartialHom) -> Obstruction | None:
    """Why ``psi`` fails to certify tractability, or None when it certifies it."""
    target = psi.target
    image = psi.image.members
    if not target.is_abelian(image):
        return Obstruction(psi, "NonAbelianImage")
    for s in image:
        if not is_regular(target, s):
            return Obstruction(psi, "NonRegularImageElement", s)
    return None


def _note(t: PromiseTemplate) -> str:
    return "aip" if t.is_group_template() else "blp_aip"


def classify_monoid_template(t: PromiseTemplate, cap: int = DEFAULT_OBSTRUCTION_CAP) -> ClassificationResult:
    if not isinstance(t.source, Monoid) or not isinstance(t.target, Monoid):
        raise ClassifyError("monoid templates need monoids on both sides")
    witness = None
    obstructions: list[Obstruction] = []
    count = 0
    truncated = False
    for psi in enumerate_extending_homs(t.source, t.target, t.partial, "all"):
        count += 1
        ob = diagnose(psi)
        if ob is None:
            if witness is None or psi.key() < witness.key():
                witness = psi
        elif len(obstructions) < cap:
            obstructions.append(ob)
        else:
            truncated = True
    if count == 0:
        return ClassificationResult(Verdict.ILL_FORMED)
    if witness is not None:
        return ClassificationResult(Verdict.TRACTABLE, witness, hom_count=count, algorithm_note=_note(t))
    obstructions.sort(key=lambda o: o.hom.key())
    return ClassificationResult(Verdict.NP_HARD, None, obstructions, truncated, count)


def classify_group_template(t: PromiseTemplate, cap: int = DEFAULT_OBSTRUCTION_CAP) -> ClassificationResult:
    """Group version: an Abelian extending homomorphism is all that is needed."""
    if not t.is_group_template():
        raise ClassifyError("group templates need groups on both sides")
    witness = None
    obstructions: list[Obstruction] = []
    count = 0
    truncated = False
    for psi in enumerate_extending_homs(t.source, t.target, t.partial, "all"):
        count += 1
        if t.target.is_abelian(psi.image.members):
            if witness is None or psi.key() < witness.key():
                witness = psi
        elif len(obstructions) < cap:
            obstructions.append(Obstruction(psi, "NonAbelianImage"))
        else:
            truncated = True
    if count == 0:
        return ClassificationResult(Verdict.ILL_FORMED)
    if witness is not None:
        return ClassificationResult(Verdict.TRACTABLE, witness, hom_count=count, algorithm_note="aip")
    obstructions.sort(key=lambda o: o.hom.key())
    return ClassificationResult(Verdict.NP_HARD, None, obstructions, truncated, count)


def classify(t: PromiseTemplate, cap: int = DEFAULT_OBSTRUCTION_CAP) -> ClassificationResult:
    if t.is_group_template():
        return classify_group_template(t, cap)
    return classify_monoid_template(t, cap)


def classify_csp(M: Monoid, N: SubAlgebra | None = None, cap: int = DEFAULT_OBSTRUCTION_CAP) -> ClassificationResult:
    """Classify the ordinary CSP of equations over ``M`` with constants from ``N``."""
    if N is not None and N.kind == "semigroup":
        raise ClassifyError("constants must form a submonoid")
    return classify_monoid_template(PromiseTemplate.csp(M, N), cap)


def witness_is_valid(t: PromiseTemplate, psi: PartialHom) -> bool:
    if not psi.is_total or not psi.extends(t.partial):
        return False
    try:
        PartialHom(t.source, t.target, SubAlgebra.whole(t.source), psi.mapping)
    except ValueError:
        return False
    if isinstance(t.source, Monoid) and psi(t.source.identity) != t.target.identity:
        return False
    return diagnose(psi) is None


def sandwich_structure(t: PromiseTemplate, psi: PartialHom) -> RelationalStructure:
    """The finite structure between the two sides: ``im(psi)`` with its own products."""
    image = psi.image.members
    tab = t.target.table
    ims = set(image)
    rel = {"mul": {(a, b, tab[a][b]) for a in image for b in image if tab[a][b] in ims}}
    sig = {"mul": 3}
    for c in t.constants:
        rel[fix_symbol(c)] = {(t.partial(c),)}
        sig[fix_symbol(c)] = 1
    return RelationalStructure(image, rel, sig)


def verify_sandwich(t: PromiseTemplate, psi: PartialHom) -> bool:
    """Check ``A -psi-> C -inclusion-> B``."""
    C = sandwich_structure(t, psi)
    A, B = t.a_structure(), t.b_structure()
    to_c = {a: psi(a) for a in A.universe}
    to_b = {c: c for c in C.universe}
    return is_homomorphism(to_c, A, C) and is_homomorphism(to_b, C, B)
