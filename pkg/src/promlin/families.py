"""Constructors for concrete finite algebras."""
from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .algebra import Group, Monoid, Semigroup, SubAlgebra


def trivial_monoid() -> Group:
    return Group(["e"], [[0]], 0)


def cyclic_group(n: int) -> Group:
    return Group([str(i) for i in range(n)], [[(i + j) % n for j in range(n)] for i in range(n)], 0)


def monogenic_monoid(index: int, period: int) -> Monoid:
    """``{e, a, a^2, ...}`` with ``a^(index + period) = a^index``, identity adjoined.

    ``monogenic_monoid(2, 1)`` is ``{e, a, a^2}`` with ``a^2`` absorbing;
    ``monogenic_monoid(1, 2)`` is the two-element group with a fresh identity.
    """
    if index < 1 or period < 1:
        raise ValueError("index and period must be positive")
    m = index + period - 1  # powers a^1 .. a^m

    def reduce(k):
        if k <= m:
            return k
        return index + (k - index) % period

    labels = ["e"] + ["a" if k == 1 else f"a{k}" for k in range(1, m + 1)]
    table = [[reduce(i + j) if i and j else i + j for j in range(m + 1)] for i in range(m + 1)]
    return Monoid(labels, table, 0)


def chain_semilattice(n: int) -> Monoid:
    """Totally ordered semilattice ``0 < 1 < ... < n-1`` with ``min`` as product."""
    return Monoid([str(i) for i in range(n)], [[min(i, j) for j in range(n)] for i in range(n)], n - 1)


def _perm_compose(p, q):
    # (p * q)(x) = p(q(x)): apply q first
    return tuple(p[x] for x in q)


def permutation_group(gens: Sequence[tuple[int, ...]], namer: Callable | None = None) -> Group:
    n = len(gens[0])
    ident = tuple(range(n))
    elems = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for a in frontier:
            for g in gens:
                c = _perm_compose(a, g)
                if c not in elems:
                    elems.add(c)
                    new.append(c)
        frontier = new
    order = sorted(elems)
    pos = {p: i for i, p in enumerate(order)}
    table = [[pos[_perm_compose(a, b)] for b in order] for a in order]
    labels = [namer(p) if namer else cycle_notation(p) for p in order]
    G = Group(labels, table, pos[ident])
    G.permutations = tuple(order)
    return G


def cycle_notation(p: tuple[int, ...]) -> str:
    seen = set()
    cycles = []
    for s in range(len(p)):
        if s in seen or p[s] == s:
            continue
        cyc = [s]
        seen.add(s)
        x = p[s]
        while x != s:
            cyc.append(x)
            seen.add(x)
            x = p[x]
        cycles.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(cycles) or "e"


def symmetric_group(n: int) -> Group:
    if n == 1:
        return trivial_monoid()
    gens = [tuple([1, 0] + list(range(2, n)))]
    if n > 2:
        gens.append(tuple(list(range(1, n)) + [0]))
    return permutation_group(gens)


def permutation_embedding(G: Group, S: Group) -> list[int]:
    """Index in ``S`` of each element of ``G`` when both are permutation groups of the same degree."""
    pos = {p: i for i, p in enumerate(S.permutations)}
    return [pos[p] for p in G.permutations]


def dihedral_group(n: int) -> Group:
    """Symmetries of the regular ``n``-gon (order ``2n``), as permutations of its vertices.

    Labels are words ``r^i`` / ``r^i f`` in the rotation and a reflection.
    """
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((n - 1 - i) % n for i in range(n))
    words = {}
    x = tuple(range(n))
    for i in range(n):
        words[x] = "e" if i == 0 else ("r" if i == 1 else f"r{i}")
        words[_perm_compose(x, ref)] = "f" if i == 0 else ("rf" if i == 1 else f"r{i}f")
        x = _perm_compose(x, rot)
    return permutation_group([rot, ref], namer=lambda p: words[p])


def quaternion_group() -> Group:
    units = ["1", "i", "j", "k"]
    # unit products: (sign, unit)
    rule = {
        ("1", u): (1, u) for u in units
    }
    rule.update({(u, "1"): (1, u) for u in units})
    rule.update({
        ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
        ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
        ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j"),
    })
    elems = [(s, u) for s in (1, -1) for u in units]
    labels = [("" if s == 1 else "-") + u for s, u in elems]
    pos = {e: i for i, e in enumerate(elems)}

    def mul(a, b):
        s, u = rule[(a[1], b[1])]
        return (a[0] * b[0] * s, u)

    table = [[pos[mul(a, b)] for b in elems] for a in elems]
    return Group(labels, table, 0)


def full_transformation_monoid(n: int) -> Monoid:
    maps = list(itertools.product(range(n), repeat=n))
    pos = {m: i for i, m in enumerate(maps)}
    # compose left to right: (f g)(x) = g(f(x))
    table = [[pos[tuple(g[f[x]] for x in range(n))] for g in maps] for f in maps]
    labels = ["".join(map(str, m)) for m in maps]
    return Monoid(labels, table, pos[tuple(range(n))])


def direct_product(A: Semigroup, B: Semigroup, *, check: bool = False) -> Semigroup:
    pairs = [(a, b) for a in A.elements for b in B.elements]
    nb = B.size
    table = [[A.table[a1][a2] * nb + B.table[b1][b2] for (a2, b2) in pairs] for (a1, b1) in pairs]
    labels = [f"({A.labels[a]},{B.labels[b]})" for a, b in pairs]
    if isinstance(A, Group) and isinstance(B, Group):
        inv = [A.inverse[a] * nb + B.inverse[b] for a, b in pairs]
        return Group(labels, table, A.identity * nb + B.identity, inv, check=check)
    if isinstance(A, Monoid) and isinstance(B, Monoid):
        return Monoid(labels, table, A.identity * nb + B.identity, check=check)
    return Semigroup(labels, table, check=check)


def direct_power(M: Semigroup, k: int) -> Semigroup:
    """``M^k`` with elements ordered lexicographically (mixed radix, first coordinate most significant)."""
    n = M.size
    tuples = list(itertools.product(range(n), repeat=k))
    t = M.np_table
    arr = np.array(tuples, dtype=np.int64).reshape(len(tuples), k)
    weights = n ** np.arange(k - 1, -1, -1)
    prod = t[arr[:, None, :], arr[None, :, :]]  # (N, N, k)
    table = (prod * weights).sum(axis=2)
    labels = ["(" + ",".join(str(M.labels[x]) for x in tp) + ")" for tp in tuples]
    if isinstance(M, Group):
        inv = [int(np.dot([M.inverse[x] for x in tp], weights)) for tp in tuples]
        return Group(labels, table.tolist(), int(M.identity * weights.sum()), inv, check=False)
    if isinstance(M, Monoid):
        return Monoid(labels, table.tolist(), int(M.identity * weights.sum()), check=False)
    return Semigroup(labels, table.tolist(), check=False)


def power_index(n: int, coords: Sequence[int]) -> int:
    idx = 0
    for c in coords:
        idx = idx * n + c
    return idx


def power_coords(n: int, k: int, idx: int) -> tuple[int, ...]:
    out = []
    for _ in range(k):
        idx, r = divmod(idx, n)
        out.append(r)
    return tuple(reversed(out))


def with_identity(S: Semigroup, label: str = "1") -> Monoid:
    """Adjoin a fresh identity element (placed at index 0)."""
    n = S.size
    if label in S.labels:
        label = label + "'"
    labels = [label] + list(S.labels)
    table = [list(range(n + 1))] + [[i + 1] + [S.table[i][j] + 1 for j in range(n)] for i in range(n)]
    return Monoid(labels, table, 0)


def with_zero(S: Semigroup, label: str = "z") -> Semigroup:
    n = S.size
    labels = list(S.labels) + [label]
    table = [list(row) + [n] for row in S.table] + [[n] * (n + 1)]
    if isinstance(S, Monoid):
        return Monoid(labels, table, S.identity)
    return Semigroup(labels, table)


def subgroup_generated(G: Group, gens) -> SubAlgebra:
    return SubAlgebra.generated(G, gens, "group")


# --------------------------------------------------------------------------- exhaustive enumeration


@lru_cache(maxsize=None)
def all_monoids(n: int) -> tuple[Monoid, ...]:
    """Every monoid of order ``n`` up to isomorphism (identity at index 0)."""
    if n >= 5:
        return monoids_by_search(n)
    if n == 1:
        return (trivial_monoid(),)
    free = [(i, j) for i in range(1, n) for j in range(1, n)]
    vals = np.array(list(itertools.product(range(n), repeat=len(free))), dtype=np.int8)
    B = len(vals)
    T = np.zeros((B, n, n), dtype=np.int8)
    T[:, 0, :] = np.arange(n)
    T[:, :, 0] = np.arange(n)
    for c, (i, j) in enumerate(free):
        T[:, i, j] = vals[:, c]
    Ti = T.astype(np.int64)
    bidx = np.arange(B)[:, None, None, None]
    ij = Ti[:, :, :, None]                              # T[i,j]
    left = Ti[bidx, ij, np.arange(n)[None, None, None, :]]      # T[T[i,j], k]
    jk = Ti[:, None, :, :]                              # T[j,k]
    right = Ti[bidx, np.arange(n)[None, :, None, None], jk]     # T[i, T[j,k]]
    ok = (left == right).all(axis=(1, 2, 3))
    seen = set()
    out = []
    perms = [(0,) + p for p in itertools.permutations(range(1, n))]
    for tab in T[ok]:
        tab = tab.astype(np.int64)
        canon = min(_relabel(tab, p) for p in perms)
        if canon in seen:
            continue
        seen.add(canon)
        table = np.array(canon, dtype=np.int64).reshape(n, n)
        out.append(Monoid([str(i) for i in range(n)], table.tolist(), 0, check=False))
    return tuple(out)


def monoids_by_search(n: int) -> tuple[Monoid, ...]:
    """Every monoid of order ``n`` up to isomorphism, by filling the table cell by cell.

    Associativity is checked on each triple as soon as its four products are known.
    """
    if n == 1:
        return (trivial_monoid(),)
    U = -1
    tab = [[U] * n for _ in range(n)]
    for i in range(n):
        tab[0][i] = tab[i][0] = i
    free = [(i, j) for i in range(1, n) for j in range(1, n)]
    # triples touching a cell, so a fill only re-checks what it can affect
    triples = [(a, b, c) for a in range(1, n) for b in range(1, n) for c in range(1, n)]

    def consistent() -> bool:
        for a, b, c in triples:
            ab, bc = tab[a][b], tab[b][c]
            if ab == U or bc == U:
                continue
            left, right = tab[ab][c], tab[a][bc]
            if left != U and right != U and left != right:
                return False
        return True

    perms = [(0,) + p for p in itertools.permutations(range(1, n))]
    seen: set = set()
    out: list[Monoid] = []

    def rec(k: int):
        if k == len(free):
            arr = np.array(tab, dtype=np.int64)
            canon = min(_relabel(arr, p) for p in perms)
            if canon not in seen:
                seen.add(canon)
                table = np.array(canon, dtype=np.int64).reshape(n, n)
                out.append(Monoid([str(i) for i in range(n)], table.tolist(), 0, check=False))
            return
        i, j = free[k]
        for v in range(n):
            tab[i][j] = v
            if consistent():
                rec(k + 1)
        tab[i][j] = U

    rec(0)
    out.sort(key=lambda M: M.table)
    return tuple(out)


def _relabel(tab: np.ndarray, perm: tuple[int, ...]) -> tuple[int, ...]:
    # perm maps old index -> new index
    n = len(perm)
    inv = [0] * n
    for old, new in enumerate(perm):
        inv[new] = old
    p = np.array(perm)
    new = p[tab[np.ix_(inv, inv)]]
    return tuple(int(v) for v in new.ravel())


@lru_cache(maxsize=None)
def groups_up_to_order(max_order: int) -> tuple[tuple[str, Group], ...]:
    """All groups of order at most 8 up to isomorphism, by name."""
    if max_order > 8:
        raise ValueError("only orders up to 8 are tabulated")
    out = [(f"Z{n}", cyclic_group(n)) for n in range(1, max_order + 1)]
    extra = [
        ("Z2xZ2", lambda: direct_product(cyclic_group(2), cyclic_group(2), check=True)),
        ("S3", lambda: symmetric_group(3)),
        ("Z2xZ4", lambda: direct_product(cyclic_group(2), cyclic_group(4), check=True)),
        ("Z2xZ2xZ2", lambda: direct_product(direct_product(cyclic_group(2), cyclic_group(2)), cyclic_group(2), check=True)),
        ("D4", lambda: dihedral_group(4)),
        ("Q8", quaternion_group),
    ]
    orders = {"Z2xZ2": 4, "S3": 6, "Z2xZ4": 8, "Z2xZ2xZ2": 8, "D4": 8, "Q8": 8}
    out += [(name, make()) for name, make in extra if orders[name] <= max_order]
    return tuple(out)
