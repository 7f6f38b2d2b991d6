"""Independent brute-force reference implementations used for cross-checking.

Nothing here reuses the generator-based homomorphism search or the
power-cycle regularity test: homomorphisms are found by filtering every map
between carriers, and regularity uses its defining equations directly.
"""
from __future__ import annotations

import itertools

import numpy as np


def all_monoid_homs(table1, e1: int, table2, e2: int) -> np.ndarray:
    """Rows are the image vectors of every identity-preserving multiplicative map."""
    t1 = np.asarray(table1)
    t2 = np.asarray(table2)
    n1, n2 = len(t1), len(t2)
    maps = np.array(list(itertools.product(range(n2), repeat=n1)), dtype=np.int64).reshape(-1, n1)
    maps = maps[maps[:, e1] == e2]
    lhs = maps[:, t1]                                   # f(ab)
    rhs = t2[maps[:, :, None], maps[:, None, :]]        # f(a) f(b)
    ok = (lhs == rhs).all(axis=(1, 2))
    return maps[ok]


def regular_by_definition(table, s: int) -> bool:
    """Some ``t`` has ``s s t = s`` and ``s t = t s``."""
    s2 = table[s][s]
    return any(table[s2][t] == s and table[s][t] == table[t][s] for t in range(len(table)))


def dichotomy_verdict(table1, e1, table2, e2, partial: dict[int, int], homs: np.ndarray | None = None) -> str:
    """Verdict string computed straight from the definition."""
    if homs is None:
        homs = all_monoid_homs(table1, e1, table2, e2)
    keys = list(partial)
    vals = [partial[k] for k in keys]
    ext = homs[(homs[:, keys] == vals).all(axis=1)] if keys else homs
    if len(ext) == 0:
        return "IllFormedTemplate"
    for row in ext:
        image = sorted(set(int(v) for v in row))
        commutes = all(table2[a][b] == table2[b][a] for a in image for b in image)
        if commutes and all(regular_by_definition(table2, s) for s in image):
            return "Tractable"
    return "NPHard"


def cyclic_submonoid(table, e: int, s: int) -> list[int]:
    out = [e]
    x = s
    while x not in out:
        out.append(x)
        x = table[x][s]
    return sorted(out)


def partial_maps_on_cyclic(table1, e1, table2, e2, s: int) -> list[dict[int, int]]:
    """Every homomorphism from the submonoid generated by ``s`` into the target."""
    dom = cyclic_submonoid(table1, e1, s)
    out = []
    for h in range(len(table2)):
        f = {e1: e2}
        ok = True
        x, y = s, h
        while ok:
            if x in f:
                ok = f[x] == y
                break
            f[x] = y
            x, y = table1[x][s], table2[y][h]
        if ok and set(f) == set(dom):
            if all(f[table1[a][b]] == table2[f[a]][f[b]] for a in dom for b in dom):
                out.append(f)
    return out


def brute_force_satisfiable(n_vars: int, equations, table, fixes: dict[int, int] | None = None) -> bool:
    """Try every assignment; equations are ``("mul", i, j, k)`` or ``("fix", i, value)``."""
    n = len(table)
    for asg in itertools.product(range(n), repeat=n_vars):
        if all((table[asg[e[1]]][asg[e[2]]] == asg[e[3]]) if e[0] == "mul" else asg[e[1]] == e[2]
               for e in equations):
            return True
    return False
