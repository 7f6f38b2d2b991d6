"""JSON formats for algebras, partial maps, templates, systems, digraphs and reports."""
from __future__ import annotations

import json
from pathlib import Path

from .algebra import AlgebraError, Group, Monoid, PartialHom, Semigroup, SubAlgebra
from .eqsys import EqsysError, EquationSystem, Fix, Mul, PromiseTemplate
from .reduce import Digraph, ReduceError, SigmaPlus


class FormatError(ValueError):
    pass


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=True) + "\n"


def read_json(path) -> object:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    except OSError as exc:
        raise FormatError(f"{path}: {exc.strerror}") from None


def _need(obj, key, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise FormatError(f"missing field {key!r}")
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise FormatError(f"field {key!r} has the wrong type")
    return val


# --------------------------------------------------------------------------- algebras


def algebra_to_json(S: Semigroup) -> dict:
    out = {"kind": S.kind, "elements": [str(x) for x in S.labels], "table": [list(r) for r in S.table]}
    if isinstance(S, Monoid):
        out["identity"] = S.identity
    if isinstance(S, Group):
        out["inverse"] = list(S.inverse)
    return out


def algebra_from_json(obj) -> Semigroup:
    kind = _need(obj, "kind", str)
    labels = _need(obj, "elements", list)
    table = _need(obj, "table", list)
    try:
        if kind == "semigroup":
            return Semigroup(labels, table)
        if kind == "monoid":
            return Monoid(labels, table, _need(obj, "identity", int))
        if kind == "group":
            return Group(labels, table, _need(obj, "identity", int), obj.get("inverse"))
    except (AlgebraError, TypeError, IndexError) as exc:
        raise FormatError(f"invalid algebra: {exc}") from None
    raise FormatError(f"unknown algebra kind {kind!r}")


def load_algebra(ref: str) -> Semigroup:
    """A JSON file path, or ``name:<corpus name>``."""
    if ref.startswith("name:"):
        from .corpus import named_algebra
        try:
            return named_algebra(ref[5:])
        except (KeyError, ValueError) as exc:
            raise FormatError(str(exc)) from None
    return algebra_from_json(read_json(ref))


def element_index(S: Semigroup, ref) -> int:
    """Accept an index or a label."""
    if isinstance(ref, int) and not isinstance(ref, bool):
        if not 0 <= ref < S.size:
            raise FormatError(f"element index {ref} out of range")
        return ref
    if isinstance(ref, str):
        if ref in S.labels:
            return S.labels.index(ref)
        if ref.isdigit() and int(ref) < S.size:
            return int(ref)
    raise FormatError(f"unknown element {ref!r}")


# --------------------------------------------------------------------------- partial maps and templates


def partial_to_json(f: PartialHom) -> dict:
    return {"domain": list(f.domain.members), "map": {str(k): v for k, v in sorted(f.mapping.items())},
            "kind": f.domain.kind}


def partial_from_json(obj, source: Semigroup, target: Semigroup) -> PartialHom:
    domain = _need(obj, "domain", list)
    raw = _need(obj, "map", dict)
    try:
        mapping = {int(k): int(v) for k, v in raw.items()}
    except (TypeError, ValueError):
        raise FormatError("map keys and values must be element indices") from None
    kind = obj.get("kind")
    if kind is None:
        if isinstance(source, Monoid) and source.identity in domain:
            kind = "monoid"
        else:
            kind = "semigroup"
    try:
        sub = SubAlgebra(source, domain, kind)
        return PartialHom(source, target, sub, mapping)
    except AlgebraError as exc:
        raise FormatError(f"invalid partial homomorphism: {exc}") from None


def template_to_json(t: PromiseTemplate) -> dict:
    return {"source": algebra_to_json(t.source), "target": algebra_to_json(t.target),
            "phi": partial_to_json(t.partial)}


def template_from_json(obj) -> PromiseTemplate:
    source = algebra_from_json(_need(obj, "source", dict))
    target = algebra_from_json(_need(obj, "target", dict))
    return PromiseTemplate(source, target, partial_from_json(_need(obj, "phi", dict), source, target))


def hom_to_json(f: PartialHom) -> dict:
    """Label-level rendering used in reports."""
    src, dst = f.source.labels, f.target.labels
    return {str(src[k]): str(dst[v]) for k, v in sorted(f.mapping.items())}


# --------------------------------------------------------------------------- systems


def system_to_json(sys: EquationSystem, constants_from: Semigroup | None = None) -> dict:
    eqs = []
    for eq in sys.equations:
        if isinstance(eq, Mul):
            eqs.append({"mul": [eq.x, eq.y, eq.z]})
        else:
            c = str(constants_from.labels[eq.c]) if constants_from is not None else eq.c
            eqs.append({"fix": [eq.x, c]})
    return {"variables": list(sys.variables), "equations": eqs}


def system_from_json(obj, constants_from: Semigroup) -> EquationSystem:
    variables = _need(obj, "variables", list)
    eqs = []
    for e in _need(obj, "equations", list):
        if isinstance(e, dict) and "mul" in e and len(e["mul"]) == 3:
            eqs.append(Mul(*[str(v) for v in e["mul"]]))
        elif isinstance(e, dict) and "fix" in e and len(e["fix"]) == 2:
            x, c = e["fix"]
            eqs.append(Fix(str(x), element_index(constants_from, c)))
        else:
            raise FormatError(f"bad equation entry {e!r}")
    try:
        return EquationSystem([str(v) for v in variables], eqs)
    except EqsysError as exc:
        raise FormatError(str(exc)) from None


def assignment_to_json(asg: dict, S: Semigroup) -> dict:
    return {x: str(S.labels[v]) for x, v in asg.items()}


def assignment_from_json(obj, S: Semigroup) -> dict[str, int]:
    if isinstance(obj, dict) and "assignment" in obj:
        obj = obj["assignment"]
    if not isinstance(obj, dict):
        raise FormatError("assignment must be an object")
    return {str(x): element_index(S, v) for x, v in obj.items()}


# --------------------------------------------------------------------------- digraphs


def digraph_to_json(D) -> dict:
    out = {"vertices": [str(v) for v in D.vertices], "edges": sorted([str(u), str(v)] for u, v in D.edges)}
    if isinstance(D, SigmaPlus):
        out["P"] = sorted(str(v) for v in D.P)
        out["Q"] = sorted(str(v) for v in D.Q)
    return out


def digraph_from_json(obj, marked: bool | None = None):
    verts = [str(v) for v in _need(obj, "vertices", list)]
    edges = []
    for e in _need(obj, "edges", list):
        if not isinstance(e, list) or len(e) != 2:
            raise FormatError(f"bad edge {e!r}")
        edges.append((str(e[0]), str(e[1])))
    if marked is None:
        marked = "P" in obj or "Q" in obj
    try:
        if marked:
            return SigmaPlus(verts, edges, [str(v) for v in obj.get("P", [])], [str(v) for v in obj.get("Q", [])])
        return Digraph(verts, edges)
    except ReduceError as exc:
        raise FormatError(str(exc)) from None
