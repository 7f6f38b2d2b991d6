"""Search for the smallest Lin(Z2ext) instance that the affine relaxation accepts but has no solution.

Instances are enumerated by number of equations, then variables, in a fixed order,
so the first hit is reproducible. Prints the instance as JSON.
"""
from __future__ import annotations

import argparse
import itertools
import sys

from promlin import jsonio
from promlin.corpus import z2ext
from promlin.eqsys import EquationSystem, Fix, Mul, PromiseTemplate, brute_force_solve, system_to_structure
from promlin.relax import decide_aip, decide_blp_aip


def candidate_equations(vs, constants):
    muls = [Mul(x, y, z) for x, y, z in itertools.product(vs, repeat=3)]
    fixes = [Fix(x, c) for x in vs for c in constants]
    return muls + fixes


def search(max_vars: int, max_eqs: int):
    t = PromiseTemplate.csp(z2ext())
    A = t.a_structure()
    for n_eqs in range(1, max_eqs + 1):
        for n_vars in range(1, max_vars + 1):
            vs = [f"v{i}" for i in range(n_vars)]
            pool = candidate_equations(vs, t.constants)
            for eqs in itertools.combinations(pool, n_eqs):
                used = {v for e in eqs for v in ((e.x, e.y, e.z) if isinstance(e, Mul) else (e.x,))}
                if len(used) != n_vars:
                    continue
                sys_ = EquationSystem(vs, list(eqs))
                X = system_to_structure(sys_, t.constants)
                if not decide_aip(X, A) or brute_force_solve(sys_, t.target) is not None:
                    continue
                return t, sys_, decide_blp_aip(X, A)
    return None


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-vars", type=int, default=3)
    ap.add_argument("--max-eqs", type=int, default=4)
    args = ap.parse_args(argv)
    hit = search(args.max_vars, args.max_eqs)
    if hit is None:
        print("no gap instance in range", file=sys.stderr)
        return 1
    t, sys_, blp_aip = hit
    out = jsonio.system_to_json(sys_, t.source)
    out["blp_aip_accepts"] = blp_aip
    sys.stdout.write(jsonio.dumps(out))
    return 0


if __name__ == "__main__":
    sys.exit(main())
