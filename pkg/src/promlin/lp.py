"""Exact linear programming over the rationals.

The simplex method here keeps an all-integer tableau (fraction-free pivoting)
so that no floating point or gcd-normalized fractions appear in the inner
loop: every entry is an integer that represents ``entry / denom``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence


class _Tableau:
    """Integer tableau for ``A x = b, x >= 0`` with Bland's pivoting rule."""

    def __init__(self, rows: Sequence[Sequence[int]], rhs: Sequence[int]):
        self.m = len(rows)
        self.n = len(rows[0]) if rows else 0
        n, m = self.n, self.m
        self.width = n + m + 1  # originals, artificials, rhs
        self.T: list[list[int]] = []
        for i, (row, b) in enumerate(zip(rows, rhs)):
            sign = -1 if b < 0 else 1
            r = [sign * int(v) for v in row] + [0] * m + [sign * int(b)]
            r[n + i] = 1
            self.T.append(r)
        self.basis = [n + i for i in range(m)]
        self.denom = 1
        self.active = [True] * (n + m)  # columns allowed to enter
        for j in range(n, n + m):
            self.active[j] = False
        self.obj: list[int] = [0] * self.width

    # -- pivoting

    def pivot(self, r: int, c: int) -> None:
        T, D = self.T, self.denom
        prow = T[r]
        p = prow[c]
        rows = T + [self.obj]
        for i, row in enumerate(rows):
            if i == r:
                continue
            f = row[c]
            if f == 0:
                if p != D:
                    for j in range(self.width):
                        v = row[j]
                        if v:
                            row[j] = v * p // D
                continue
            for j in range(self.width):
                row[j] = (row[j] * p - f * prow[j]) // D
        self.basis[r] = c
        if p < 0:
            for row in rows:
                for j in range(self.width):
                    row[j] = -row[j]
            p = -p
        self.denom = p

    def set_objective(self, costs: dict[int, int]) -> None:
        """Objective row for maximizing ``sum costs[j] * x_j`` (reduced costs, scaled)."""
        D = self.denom
        obj = [0] * self.width
        for j, cj in costs.items():
            obj[j] -= cj * D
        for i, bj in enumerate(self.basis):
            cb = costs.get(bj, 0)
            if cb:
                row = self.T[i]
                for j in range(self.width):
                    if row[j]:
                        obj[j] += cb * row[j]
        # basic columns have zero reduced cost; keep exact zeros there
        for bj in self.basis:
            obj[bj] = 0
        self.obj = obj

    def optimize(self) -> int | None:
        """Run Bland's rule to optimality; return an unbounded entering column or None."""
        T = self.T
        while True:
            c = next((j for j in range(self.width - 1) if self.active[j] and self.obj[j] < 0), None)
            if c is None:
                return None
            best = None
            for i in range(self.m):
                a = T[i][c]
                if a > 0:
                    if best is None:
                        best = i
                        continue
                    lhs = T[i][-1] * T[best][c]
                    rhs = T[best][-1] * a
                    if lhs < rhs or (lhs == rhs and self.basis[i] < self.basis[best]):
                        best = i
            if best is None:
                return c
            self.pivot(best, c)

    def point(self) -> list[Fraction]:
        x = [Fraction(0)] * self.n
        for i, bj in enumerate(self.basis):
            if bj < self.n:
                x[bj] = Fraction(self.T[i][-1], self.denom)
        return x

    def ray(self, c: int) -> list[Fraction]:
        d = [Fraction(0)] * self.n
        d[c] = Fraction(1)
        for i, bj in enumerate(self.basis):
            if bj < self.n:
                d[bj] = Fraction(-self.T[i][c], self.denom)
        return d

    # -- phase one

    def phase_one(self) -> bool:
        n, m = self.n, self.m
        costs = {n + i: -1 for i in range(m)}
        self.set_objective(costs)
        for j in range(n):
            self.active[j] = True
        self.optimize()
        if self.obj[-1] != 0:
            return False
        # drive remaining artificials out of the basis; drop redundant rows
        i = 0
        while i < self.m:
            if self.basis[i] >= n:
                row = self.T[i]
                c = next((j for j in range(n) if row[j] != 0), None)
                if c is None:
                    del self.T[i]
                    del self.basis[i]
                    self.m -= 1
                    continue
                self.pivot(i, c)
            i += 1
        return True


def feasible_point(rows: Sequence[Sequence[int]], rhs: Sequence[int]) -> list[Fraction] | None:
    """Some nonnegative rational solution of ``rows x = rhs``, or None."""
    n = len(rows[0]) if rows else 0
    if not rows:
        return [Fraction(0)] * n
    tab = _Tableau(rows, rhs)
    if not tab.phase_one():
        return None
    return tab.point()


def relative_interior_point(rows: Sequence[Sequence[int]], rhs: Sequence[int], ncols: int | None = None
                            ) -> tuple[list[Fraction], set[int]] | None:
    """A nonnegative solution positive on every column that is positive in some solution.

    Repeatedly maximizes the sum of columns not yet seen positive, starting
    from the previous optimal basis, and averages the witnesses.
    """
    n = ncols if ncols is not None else (len(rows[0]) if rows else 0)
    if not rows:
        # unconstrained nonnegative orthant
        return [Fraction(1)] * n, set(range(n))
    tab = _Tableau(rows, rhs)
    if not tab.phase_one():
        return None
    for j in range(n, n + len(rows)):
        tab.active[j] = False
    for j in range(n):
        tab.active[j] = True
    witnesses = [tab.point()]
    known = {j for j, v in enumerate(witnesses[0]) if v > 0}
    while True:
        unknown = [j for j in range(n) if j not in known]
        if not unknown:
            break
        tab.set_objective({j: 1 for j in unknown})
        c = tab.optimize()
        if c is not None:
            x, d = tab.point(), tab.ray(c)
            w = [a + b for a, b in zip(x, d)]
        else:
            if tab.obj[-1] == 0:
                break
            w = tab.point()
        new = {j for j, v in enumerate(w) if v > 0} - known
        if not new:
            break
        known |= new
        witnesses.append(w)
    k = len(witnesses)
    point = [sum((w[j] for w in witnesses), Fraction(0)) / k for j in range(n)]
    support = {j for j, v in enumerate(point) if v > 0}
    return point, support
