"""BLP, AIP and BLP+AIP relaxations of CSP instances, decided exactly."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable

from .eqsys import RelationalStructure
from .lattice import integer_solution
from .lp import relative_interior_point

RATIONAL = "rational_nonnegative"
INTEGER = "integer_unrestricted"


class SignatureMismatch(ValueError):
    pass


@dataclass
class RelaxationSystem:
    """Sparse system ``A v = b``; columns are ``("lam", x, a)`` or ``("mu", constraint, tuple)``."""
    columns: list
    rows: list[dict[int, int]]
    rhs: list[int]
    mode: str = RATIONAL

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.columns)

    def matrix(self) -> list[list[int]]:
        n = len(self.columns)
        out = []
        for row in self.rows:
            dense = [0] * n
            for j, v in row.items():
                dense[j] = v
            out.append(dense)
        return out

    def with_mode(self, mode: str) -> "RelaxationSystem":
        return RelaxationSystem(self.columns, self.rows, self.rhs, mode)

    def restrict(self, keep: Iterable[int]) -> "RelaxationSystem":
        """Delete every column outside ``keep`` (they are fixed to zero)."""
        keep = sorted(set(keep))
        pos = {j: i for i, j in enumerate(keep)}
        rows = [{pos[j]: v for j, v in row.items() if j in pos} for row in self.rows]
        return RelaxationSystem([self.columns[j] for j in keep], rows, list(self.rhs), self.mode)

    def satisfied_by(self, v) -> bool:
        if len(v) != len(self.columns):
            return False
        if self.mode == RATIONAL and any(x < 0 for x in v):
            return False
        if self.mode == INTEGER and any(Fraction(x).denominator != 1 for x in v):
            return False
        return all(sum(c * v[j] for j, c in row.items()) == b for row, b in zip(self.rows, self.rhs))

    def dump(self, path) -> None:
        """Matrix-market style coordinate listing plus the right-hand side and column names."""
        m, n = self.shape
        nnz = sum(len(r) for r in self.rows)
        with open(path, "w") as fh:
            fh.write(f"%%MatrixMarket matrix coordinate integer general\n% mode {self.mode}\n")
            for j, col in enumerate(self.columns):
                fh.write(f"% column {j + 1} {col!r}\n")
            fh.write(f"{m} {n} {nnz}\n")
            for i, row in enumerate(self.rows):
                for j in sorted(row):
                    fh.write(f"{i + 1} {j + 1} {row[j]}\n")
            fh.write("% rhs\n")
            for b in self.rhs:
                fh.write(f"% {b}\n")


def constraints_of(X: RelationalStructure) -> list[tuple[str, tuple]]:
    out = []
    for name in sorted(X.relations):
        for t in sorted(X.relations[name], key=repr):
            out.append((name, t))
    return out


def build_relaxation(X: RelationalStructure, A: RelationalStructure, mode: str = RATIONAL) -> RelaxationSystem:
    for name, tuples in X.relations.items():
        if name not in A.signature:
            if tuples:
                raise SignatureMismatch(f"template has no relation {name!r}")
            continue
        if X.signature[name] != A.signature[name]:
            raise SignatureMismatch(f"arity of {name!r} differs")
    columns: list = []
    lam: dict = {}
    for x in X.universe:
        for a in A.universe:
            lam[(x, a)] = len(columns)
            columns.append(("lam", x, a))
    rows: list[dict[int, int]] = []
    rhs: list[int] = []
    for x in X.universe:
        rows.append({lam[(x, a)]: 1 for a in A.universe})
        rhs.append(1)
    for con in constraints_of(X):
        name, scope = con
        tuples = sorted(A.relations.get(name, ()), key=repr)
        mu = []
        for t in tuples:
            mu.append(len(columns))
            columns.append(("mu", con, t))
        for i, x in enumerate(scope):
            for a in A.universe:
                row = {mu[k]: 1 for k, t in enumerate(tuples) if t[i] == a}
                row[lam[(x, a)]] = row.get(lam[(x, a)], 0) - 1
                rows.append({j: v for j, v in row.items() if v})
                rhs.append(0)
    return RelaxationSystem(columns, rows, rhs, mode)


# --------------------------------------------------------------------------- presolve


class _Infeasible(Exception):
    pass


def _presolve(sys: RelaxationSystem):
    """Substitute forced values; returns (fixed values, remaining rows, rhs)."""
    nonneg = sys.mode == RATIONAL
    rows = [dict(r) for r in sys.rows]
    rhs = [Fraction(b) for b in sys.rhs]
    fixed: dict[int, Fraction] = {}
    col_rows: dict[int, set[int]] = {}
    for i, r in enumerate(rows):
        for j in r:
            col_rows.setdefault(j, set()).add(i)
    alive = set(range(len(rows)))
    queue = list(range(len(rows)))
    queued = set(queue)

    def fix(j, val):
        fixed[j] = val
        for i in col_rows.pop(j, ()):
            a = rows[i].pop(j)
            rhs[i] -= a * val
            if i in alive and i not in queued:
                queued.add(i)
                queue.append(i)

    while queue:
        i = queue.pop()
        queued.discard(i)
        if i not in alive:
            continue
        r = rows[i]
        b = rhs[i]
        if not r:
            if b != 0:
                raise _Infeasible
            alive.discard(i)
            continue
        if len(r) == 1:
            (j, a), = r.items()
            val = b / a
            if nonneg and val < 0:
                raise _Infeasible
            if not nonneg and val.denominator != 1:
                raise _Infeasible
            alive.discard(i)
            fix(j, val)
            continue
        if nonneg:
            signs = {a > 0 for a in r.values()}
            if len(signs) == 1:
                pos = signs.pop()
                if b == 0:
                    alive.discard(i)
                    for j in list(r):
                        fix(j, Fraction(0))
                elif (b > 0) != pos:
                    raise _Infeasible
    out_rows, out_rhs = [], []
    for i in sorted(alive):
        r, b = rows[i], rhs[i]
        scale = lcm(*(Fraction(v).denominator for v in r.values()), b.denominator)
        out_rows.append({j: int(v * scale) for j, v in r.items()})
        out_rhs.append(int(b * scale))
    return fixed, out_rows, out_rhs


def _components(rows: list[dict[int, int]]) -> list[tuple[list[int], list[int]]]:
    """Split rows into blocks sharing no columns: [(row indices, columns)]."""
    parent: dict[int, int] = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for r in rows:
        cols = list(r)
        for j in cols:
            parent.setdefault(j, j)
        for j in cols[1:]:
            a, b = find(cols[0]), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    blocks: dict[int, tuple[list[int], set[int]]] = {}
    for i, r in enumerate(rows):
        root = find(next(iter(r)))
        blocks.setdefault(root, ([], set()))
        blocks[root][0].append(i)
        blocks[root][1].update(r)
    return [(ri, sorted(cols)) for ri, cols in blocks.values()]


def _dense(rows, idx, cols):
    pos = {j: k for k, j in enumerate(cols)}
    out = []
    for i in idx:
        d = [0] * len(cols)
        for j, v in rows[i].items():
            d[pos[j]] = v
        out.append(d)
    return out


# --------------------------------------------------------------------------- engines


def rational_feasible_support(sys: RelaxationSystem) -> tuple[list[Fraction], set[int]] | None:
    """Relative-interior nonnegative solution and its support, or None if infeasible."""
    if sys.mode != RATIONAL:
        raise ValueError("rational support needs a rational_nonnegative system")
    n = len(sys.columns)
    try:
        fixed, rows, rhs = _presolve(sys)
    except _Infeasible:
        return None
    point = [Fraction(0)] * n
    for j, v in fixed.items():
        point[j] = v
    touched = set(fixed)
    for idx, cols in _components(rows):
        res = relative_interior_point(_dense(rows, idx, cols), [rhs[i] for i in idx], len(cols))
        if res is None:
            return None
        local, _ = res
        for k, j in enumerate(cols):
            point[j] = local[k]
        touched.update(cols)
    for j in range(n):
        if j not in touched:
            point[j] = Fraction(1)  # unconstrained column
    if not sys.satisfied_by(point):
        raise AssertionError("relative interior point failed verification")
    return point, {j for j, v in enumerate(point) if v > 0}


def integer_affine_feasible(sys: RelaxationSystem) -> list[int] | None:
    """An integer (sign-unrestricted) solution, or None if there is none."""
    sys = sys.with_mode(INTEGER)
    n = len(sys.columns)
    try:
        fixed, rows, rhs = _presolve(sys)
    except _Infeasible:
        return None
    x = [0] * n
    for j, v in fixed.items():
        x[j] = int(v)
    for idx, cols in _components(rows):
        local = integer_solution(_dense(rows, idx, cols), [rhs[i] for i in idx], len(cols))
        if local is None:
            return None
        for k, j in enumerate(cols):
            x[j] = local[k]
    if not sys.satisfied_by(x):
        raise AssertionError("integer solution failed verification")
    return x


def decide_blp(X: RelationalStructure, A: RelationalStructure) -> bool:
    return rational_feasible_support(build_relaxation(X, A)) is not None


def decide_aip(X: RelationalStructure, A: RelationalStructure) -> bool:
    return integer_affine_feasible(build_relaxation(X, A, INTEGER)) is not None


def decide_blp_aip(X: RelationalStructure, A: RelationalStructure) -> bool:
    """BLP feasibility, then AIP on the columns the BLP cannot force to zero."""
    sys = build_relaxation(X, A)
    res = rational_feasible_support(sys)
    if res is None:
        return False
    _, support = res
    return integer_affine_feasible(sys.restrict(support)) is not None
