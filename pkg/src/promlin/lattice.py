"""Integer solutions of linear systems via column-style Hermite reduction."""
from __future__ import annotations

from typing import Sequence


def _col_sub(dst: dict, src: dict, q: int) -> None:
    """dst -= q * src (sparse columns)."""
    for k, v in src.items():
        nv = dst.get(k, 0) - q * v
        if nv:
            dst[k] = nv
        else:
            dst.pop(k, None)


def column_echelon(rows: Sequence[Sequence[int]], ncols: int | None = None):
    """Column operations bringing ``A`` to lower echelon form ``H = A U``.

    Returns the columns of ``H`` and of the unimodular ``U`` as sparse dicts,
    and the (row, column) pivot positions; columns past the last pivot are zero.
    """
    m = len(rows)
    n = ncols if ncols is not None else (len(rows[0]) if rows else 0)
    # columns of A and of U as sparse dicts
    A = [dict() for _ in range(n)]
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            if v:
                A[j][i] = int(v)
    U = [{j: 1} for j in range(n)]
    pivots: list[tuple[int, int]] = []  # (row, column)
    k = 0
    for i in range(m):
        if k >= n:
            break
        while True:
            nz = [j for j in range(k, n) if A[j].get(i, 0)]
            if not nz:
                break
            j0 = min(nz, key=lambda j: (abs(A[j][i]), j))
            piv = A[j0][i]
            done = True
            for j in nz:
                if j == j0:
                    continue
                q = A[j][i] // piv
                _col_sub(A[j], A[j0], q)
                _col_sub(U[j], U[j0], q)
                if A[j].get(i, 0):
                    done = False
            if done:
                break
        nz = [j for j in range(k, n) if A[j].get(i, 0)]
        if not nz:
            continue
        j0 = nz[0]
        if j0 != k:
            A[k], A[j0] = A[j0], A[k]
            U[k], U[j0] = U[j0], U[k]
        if A[k][i] < 0:
            A[k] = {r: -v for r, v in A[k].items()}
            U[k] = {r: -v for r, v in U[k].items()}
        # keep entries left of the pivot small
        piv = A[k][i]
        for j in range(k):
            v = A[j].get(i, 0)
            q = v // piv
            if q:
                _col_sub(A[j], A[k], q)
                _col_sub(U[j], U[k], q)
        pivots.append((i, k))
        k += 1
    return A, U, pivots


def lattice_basis(generators: Sequence[Sequence[int]], dim: int) -> list[list[int]]:
    """A basis of the integer lattice spanned by ``generators`` (vectors of length ``dim``)."""
    if not generators:
        return []
    rows = [[g[i] for g in generators] for i in range(dim)]
    H, _, pivots = column_echelon(rows, len(generators))
    return [[H[c].get(i, 0) for i in range(dim)] for _, c in pivots]


def integer_solution(rows: Sequence[Sequence[int]], rhs: Sequence[int], ncols: int | None = None) -> list[int] | None:
    """Some integer vector ``x`` with ``rows x = rhs``, or None if there is none.

    ``H = A U`` is solved by forward substitution and ``x = U y``.
    """
    m = len(rows)
    n = ncols if ncols is not None else (len(rows[0]) if rows else 0)
    if m == 0:
        return [0] * n
    A, U, pivots = column_echelon(rows, n)
    # forward substitution
    y = [0] * n
    residual = [int(b) for b in rhs]
    for i, c in pivots:
        piv = A[c][i]
        if residual[i] % piv:
            return None
        y[c] = residual[i] // piv
        if y[c]:
            for r, v in A[c].items():
                residual[r] -= v * y[c]
    if any(residual):
        return None
    x = [0] * n
    for c in range(len(pivots)):
        if y[c]:
            for r, v in U[c].items():
                x[r] += v * y[c]
    return x
