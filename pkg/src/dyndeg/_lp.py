"""Exact rational simplex (two phases, Bland's rule) with dual certificates."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass
class LPResult:
    status: str                 # "optimal", "infeasible" or "unbounded"
    x: list | None = None       # primal solution
    y: list | None = None       # dual solution (one per original equality row)
    value: Fraction | None = None


def _pivot(T, basis, r, c):
    pv = T[r][c]
    T[r] = [v / pv for v in T[r]]
    for i, row in enumerate(T):
        if i != r and row[c] != 0:
            f = row[c]
            T[i] = [a - f * b for a, b in zip(row, T[r])]
    basis[r] = c


def _run(T, basis, cost, allowed):
    """Minimise cost over the tableau (last column = rhs). Bland's rule."""
    m = len(T)
    while True:
        # reduced costs: cost_j - cost_B . column_j
        enter = None
        for j in allowed:
            if j in basis:
                continue
            rc = cost[j] - sum(cost[basis[i]] * T[i][j] for i in range(m))
            if rc < 0:
                enter = j
                break
        if enter is None:
            return "optimal"
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return "unbounded"
        _pivot(T, basis, best[1], enter)


def solve(A, b, c) -> LPResult:
    """min c.x  subject to  A x = b, x >= 0, all data exact rationals."""
    m = len(A)
    n = len(c)
    A = [[Fraction(v) for v in row] for row in A]
    b = [Fraction(v) for v in b]
    c = [Fraction(v) for v in c]
    signs = [1] * m
    for i in range(m):
        if b[i] < 0:
            A[i] = [-v for v in A[i]]
            b[i] = -b[i]
            signs[i] = -1
    # columns: n originals, m artificials, rhs
    T = [A[i] + [Fraction(int(i == j)) for j in range(m)] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    phase1 = [Fraction(0)] * n + [Fraction(1)] * m
    _run(T, basis, phase1, range(n + m))
    if sum(T[i][-1] for i in range(m) if basis[i] >= n) != 0:
        return LPResult("infeasible")
    # drive artificials out of the basis; drop redundant rows
    keep = []
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if T[i][j] != 0 and j not in basis), None)
            if col is None:
                continue
            _pivot(T, basis, i, col)
        keep.append(i)
    rows = keep
    T2 = [T[i][:n] + [T[i][-1]] for i in rows]
    basis2 = [basis[i] for i in rows]
    status = _run(T2, basis2, c, range(n))
    if status != "optimal":
        return LPResult(status)
    x = [Fraction(0)] * n
    for i, j in enumerate(basis2):
        x[j] = T2[i][-1]
    value = sum(ci * xi for ci, xi in zip(c, x))
    y = _duals(A, rows, basis2, c, m)
    y = [yi * s for yi, s in zip(y, signs)]
    return LPResult("optimal", x, y, value)


def _duals(A, rows, basis, c, m):
    """Solve B^T y = c_B on the kept rows; dropped (redundant) rows get 0."""
    k = len(rows)
    M = [[A[rows[r]][basis[col]] for r in range(k)] + [c[basis[col]]] for col in range(k)]
    for col in range(k):
        p = next(r for r in range(col, k) if M[r][col] != 0)
        M[col], M[p] = M[p], M[col]
        pv = M[col][col]
        M[col] = [v / pv for v in M[col]]
        for r in range(k):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * bb for a, bb in zip(M[r], M[col])]
    y = [Fraction(0)] * m
    for r in range(k):
        y[rows[r]] = M[r][-1]
    return y
