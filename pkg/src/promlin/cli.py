"""Command-line entry point.

Exit codes: 0 success or tractable, 1 check failed or no solution, 2 malformed
input, 3 NP-hard, 4 ill-formed template, 5 refused.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import jsonio
from .algebra import AlgebraError, Monoid, quotient_semilattice
from .classify import ClassificationResult, Verdict, classify, classify_group_template, classify_monoid_template
from .eqsys import (EqsysError, PromiseTemplate, check_promise_solution, lin_structure, normalize,
                    system_to_structure)
from .jsonio import FormatError

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_HARD, EXIT_ILL, EXIT_REFUSED = 0, 1, 2, 3, 4, 5
_VERDICT_EXIT = {Verdict.TRACTABLE: EXIT_OK, Verdict.NP_HARD: EXIT_HARD, Verdict.ILL_FORMED: EXIT_ILL}


def _out(obj) -> None:
    sys.stdout.write(jsonio.dumps(obj))


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


# --------------------------------------------------------------------------- shared loading


def _add_template_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--template", help="JSON file with source, target and phi")
    p.add_argument("--m1", help="source algebra (JSON file or name:<corpus name>)")
    p.add_argument("--m2", help="target algebra (JSON file or name:<corpus name>)")
    p.add_argument("--phi", help="partial homomorphism JSON file; defaults to the identity on the source")


def _load_template(args) -> PromiseTemplate:
    if args.template:
        return jsonio.template_from_json(jsonio.read_json(args.template))
    if not args.m1:
        raise FormatError("give --template or --m1/--m2/--phi")
    m1 = jsonio.load_algebra(args.m1)
    m2 = jsonio.load_algebra(args.m2) if args.m2 else m1
    if args.phi:
        phi = jsonio.partial_from_json(jsonio.read_json(args.phi), m1, m2)
        return PromiseTemplate(m1, m2, phi)
    if m2 is not m1 and m2 != m1:
        raise FormatError("--phi is required when the two algebras differ")
    return PromiseTemplate.csp(m1)


def classification_to_json(res: ClassificationResult) -> dict:
    out = {"verdict": res.verdict.value, "algorithm_note": res.algorithm_note, "hom_count": res.hom_count,
           "truncated": res.truncated, "witness": None, "obstructions": []}
    if res.witness is not None:
        out["witness"] = jsonio.hom_to_json(res.witness)
    for ob in res.obstructions:
        row = {"map": jsonio.hom_to_json(ob.hom), "reason": ob.reason}
        if ob.element is not None:
            row["element"] = str(ob.hom.target.labels[ob.element])
        out["obstructions"].append(row)
    return out


# --------------------------------------------------------------------------- commands


def cmd_classify(args) -> int:
    t = _load_template(args)
    if not isinstance(t.source, Monoid) or not isinstance(t.target, Monoid):
        raise FormatError("classification needs monoids or groups")
    if args.group:
        if not t.is_group_template():
            raise FormatError("--group needs groups on both sides")
        res = classify_group_template(t, args.cap)
    else:
        res = classify_monoid_template(t, args.cap)
    _out(classification_to_json(res))
    return _VERDICT_EXIT[res.verdict]


def cmd_solve(args) -> int:
    from .solve import PromiseViolated, SolveError, solve_promise

    t = _load_template(args)
    instance = jsonio.system_from_json(_read_opt(args, "instance"), t.source)
    if not set(instance.constants()) <= set(t.constants):
        raise FormatError("instance uses constants outside the domain of phi")
    res = classify(t)
    if args.dump_relaxation:
        _dump_relaxation(t, instance, res.witness, args.dump_relaxation)
    if args.engine != "brute" and not res.tractable:
        _err("refused: template not tractable")
        return EXIT_REFUSED
    if args.engine == "aip" and not t.is_group_template():
        _err("warning: AIP not exact for this template (no alternating polymorphisms are guaranteed); "
             "a rejection may be wrong")
    try:
        rep = solve_promise(t, instance, res.witness, engine=args.engine)
    except PromiseViolated as exc:
        _out({"status": "no_solution", "reason": str(exc)})
        return EXIT_FAIL
    except SolveError as exc:
        _err(f"solver error: {exc}")
        return EXIT_FAIL
    _out({"status": "solved", "path": rep.path, "decisions_used": rep.decisions_used,
          "assignment": jsonio.assignment_to_json(rep.assignment, t.target)})
    return EXIT_OK


def _dump_relaxation(t: PromiseTemplate, instance, witness, path) -> None:
    """The first relaxation the solver builds: over the witness image, or over the target when none exists."""
    from .relax import build_relaxation
    from .solve import translate_to_image

    if witness is not None:
        M, _, local = translate_to_image(instance, witness)
        everything = range(M.size)
        build_relaxation(system_to_structure(local, everything), lin_structure(M, everything)).dump(path)
    else:
        build_relaxation(system_to_structure(instance, t.constants), t.b_structure()).dump(path)


def cmd_check(args) -> int:
    t = _load_template(args)
    instance = jsonio.system_from_json(_read_opt(args, "instance"), t.source)
    asg = jsonio.assignment_from_json(jsonio.read_json(args.assignment), t.target)
    ok = check_promise_solution(t, instance, asg)
    _out({"valid": ok})
    return EXIT_OK if ok else EXIT_FAIL


def _minion_target(args):
    M = jsonio.load_algebra(args.monoid)
    if not isinstance(M, Monoid):
        raise FormatError("minions need a monoid")
    return M, jsonio.element_index(M, args.target)


def _entries(M, text: str) -> tuple[int, ...]:
    return tuple(jsonio.element_index(M, x.strip()) for x in text.split(",") if x.strip())


def cmd_minion(args) -> int:
    from . import minion as mn

    M, a = _minion_target(args)
    lab = lambda xs: [str(M.labels[x]) for x in xs]  # noqa: E731
    if args.action == "enumerate":
        elems = mn.enumerate_minion(M, a, args.arity, args.budget)
        _out({"arity": args.arity, "elements": [lab(b.entries) for b in elems]})
    elif args.action == "minor":
        b = mn.MinionElement(M, a, _entries(M, args.entries))
        pi = tuple(int(x) for x in args.map.split(","))
        c = mn.minor(b, pi, args.to)
        _out({"minor": lab(c.entries)})
    elif args.action == "relevant":
        b = mn.MinionElement(M, a, _entries(M, args.entries))
        _out({"relevant": sorted(mn.relevant_coordinates(b))})
    elif args.action == "free-structure":
        A, B = mn.free_structure_template(M, a)
        _out({"A": _structure_json(A, str), "B": _structure_json(B, lambda v: lab(v))})
    elif args.action == "verify":
        out = {"axioms": mn.minion_axioms_hold(M, a, min(args.max_arity, 3), args.budget)}
        bij = mn.verify_tuple_bijection(M, a, args.max_arity)
        out["bijection"] = {"ok": bij.ok, "violation": bij.violation,
                            "counts": {str(k): list(v) for k, v in bij.counts.items()}}
        try:
            sel = mn.verify_selection_condition(M, a, args.max_arity, args.budget)
            out["selection"] = {"ok": sel.ok, "violation": sel.violation, "max_relevant": sel.max_relevant}
        except mn.RegularTarget:
            out["selection"] = None
            out["block_symmetric"] = lab(mn.block_symmetric_tuple(M, a, 1).entries)
        _out(out)
        ok = out["axioms"] and bij.ok and (out["selection"] is None or out["selection"]["ok"])
        return EXIT_OK if ok else EXIT_FAIL
    return EXIT_OK


def _structure_json(X, render) -> dict:
    return {"universe": [render(v) for v in X.universe],
            "relations": {name: sorted([render(v) for v in t] for t in X.relations[name])
                          for name in sorted(X.relations)}}


def cmd_reduce(args) -> int:
    from . import reduce as rd

    W = rd.build_edge_band()
    if args.action == "digraph-to-eq":
        I = jsonio.digraph_from_json(_read_opt(args, "instance"), marked=True)
        general = rd.digraph_to_equations(I, W)
        sys_ = normalize(general, W.semigroup, "semigroup")
        out = jsonio.system_to_json(sys_, W.semigroup)
        out["general"] = [_render_general(eq, W.semigroup) for eq in general.equations]
        _out(out)
        return EXIT_OK
    if args.action == "eq-to-digraph":
        sys_ = jsonio.system_from_json(_read_opt(args, "system"), W.semigroup)
        res = rd.equations_to_digraph(sys_, W)
        log = [{"pass": name, "touched": n} for name, n in res.log]
        if isinstance(res, rd.PsiReject):
            Q, _ = quotient_semilattice(W.semigroup)
            _out({"outcome": "reject", "log": log, "certificate": jsonio.system_to_json(res.certificate, Q)})
        else:
            _out({"outcome": "structure", "log": log, "structure": jsonio.digraph_to_json(res.structure)})
        return EXIT_OK
    if args.action == "roundtrip":
        I = jsonio.digraph_from_json(_read_opt(args, "instance"), marked=True)
        D = jsonio.digraph_from_json(_read_opt(args, "digraph"), marked=False)
        row = rd.reduction_equivalence_check(D, D, [I])[0]
        back = rd.equations_to_digraph(normalize(rd.digraph_to_equations(I, W), W.semigroup, "semigroup"), W)
        equivalent = isinstance(back, rd.PsiResult) and rd.hom_equivalent(back.structure, I)
        _out({"maps_to_extended": row.maps_to_first, "equations_solvable": row.first_solvable,
              "marked_reduction": row.reduce_verdict, "translations_invert": equivalent,
              "ok": row.ok and equivalent})
        return EXIT_OK if row.ok and equivalent else EXIT_FAIL
    return EXIT_INPUT


def _read_opt(args, name: str):
    path = getattr(args, name)
    if path is None:
        raise FormatError(f"--{name} is required")
    return jsonio.read_json(path)


def _render_general(eq, S) -> str:
    from .eqsys import Const

    def word(w):
        return " ".join(f"c:{S.labels[a.value]}" if isinstance(a, Const) else a.name for a in w)
    return f"{word(eq.lhs)} = {word(eq.rhs)}"


def cmd_corpus(args) -> int:
    from .corpus import CorpusSpec, corpus_seed, generate_corpus

    seed = args.seed if args.seed is not None else corpus_seed()
    data = generate_corpus(CorpusSpec(seed=seed, max_size=args.max_size))
    if args.out:
        root = Path(args.out)
        root.mkdir(parents=True, exist_ok=True)
        for name, alg in data["algebras"].items():
            (root / f"algebra_{name}.json").write_text(jsonio.dumps(alg))
        for name, tpl in data["templates"].items():
            safe = "".join(ch if ch.isalnum() else "_" for ch in name)
            (root / f"template_{safe}.json").write_text(jsonio.dumps(tpl))
            for k, inst in enumerate(data["instances"][name]):
                (root / f"instance_{safe}_{k}.json").write_text(jsonio.dumps(inst))
        _out({"seed": seed, "files": sorted(p.name for p in root.iterdir())})
    else:
        _out(data)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_all

    rows = run_all(args.max_size, args.seed, args.only or None)
    width = max(len(r.name) for r in rows) if rows else 10
    for r in rows:
        status = "PASS" if r.ok else "FAIL"
        line = f"{r.name:<{width}}  {status}  checked={r.checked}"
        if r.detail:
            line += f"  {r.detail}"
        print(line)
    return EXIT_OK if all(r.ok for r in rows) else EXIT_FAIL


# --------------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="promlin", description="Promise equations over finite monoids.")
    p.add_argument("--budget", type=int, default=10 ** 6, help="node cap for exhaustive searches")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="decide tractability of a template")
    _add_template_args(c)
    c.add_argument("--group", action="store_true", help="use the group criterion")
    c.add_argument("--cap", type=int, default=1000, help="obstruction list cap")
    c.set_defaults(func=cmd_classify)

    s = sub.add_parser("solve", help="solve an instance of a tractable template")
    _add_template_args(s)
    s.add_argument("--instance", required=True)
    s.add_argument("--engine", default="blp-aip", choices=["blp-aip", "aip", "brute", "group-direct"])
    s.add_argument("--dump-relaxation", metavar="PATH")
    s.set_defaults(func=cmd_solve)

    k = sub.add_parser("check", help="verify an assignment on the target side")
    _add_template_args(k)
    k.add_argument("--instance", required=True)
    k.add_argument("--assignment", required=True)
    k.set_defaults(func=cmd_check)

    m = sub.add_parser("minion", help="monoidal minion tools")
    m.add_argument("action", choices=["enumerate", "minor", "relevant", "free-structure", "verify"])
    m.add_argument("--monoid", required=True)
    m.add_argument("--target", required=True)
    m.add_argument("--arity", type=int, default=2)
    m.add_argument("--entries", default="")
    m.add_argument("--map", default="")
    m.add_argument("--to", type=int, default=1)
    m.add_argument("--max-arity", type=int, default=3)
    m.set_defaults(func=cmd_minion)

    r = sub.add_parser("reduce", help="digraph and band equation translations")
    r.add_argument("action", choices=["digraph-to-eq", "eq-to-digraph", "roundtrip"])
    r.add_argument("--instance")
    r.add_argument("--system")
    r.add_argument("--digraph")
    r.set_defaults(func=cmd_reduce)

    g = sub.add_parser("corpus", help="fixture generation")
    g.add_argument("action", choices=["generate"])
    g.add_argument("--seed", type=int)
    g.add_argument("--max-size", type=int, default=8)
    g.add_argument("--out")
    g.set_defaults(func=cmd_corpus)

    v = sub.add_parser("verify", help="run the property suites")
    v.add_argument("action", choices=["all"])
    v.add_argument("--max-size", type=int, default=4)
    v.add_argument("--seed", type=int)
    v.add_argument("--only", action="append")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (FormatError, EqsysError, AlgebraError, KeyError, ValueError) as exc:
        _err(f"error: {exc}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
