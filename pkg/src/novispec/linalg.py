"""Exact Gaussian elimination over Fraction for the reduction engine.

Dense row operations; instance sizes stay in the dozens, so no sparsity
tricks are needed.
"""

from __future__ import annotations

from fractions import Fraction


def solve(rows, rhs):
    """One solution x of A x = b over Q, or None if the system is infeasible.

    `rows` is a list of m rows of length n, `rhs` a list of length m.
    Free variables are set to zero.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    a = [ [Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(rows, rhs) ]
    pivots = []
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, m) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        pv = a[r][c]
        a[r] = [v / pv for v in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [v - f * w for v, w in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if a[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for row_idx, c in enumerate(pivots):
        x[c] = a[row_idx][n]
    return x


def rank(rows) -> int:
    m = len(rows)
    if m == 0:
        return 0
    n = len(rows[0])
    a = [[Fraction(v) for v in row] for row in rows]
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, m) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        pv = a[r][c]
        for i in range(r + 1, m):
            if a[i][c] != 0:
                f = a[i][c] / pv
                a[i] = [v - f * w for v, w in zip(a[i], a[r])]
        r += 1
        if r == m:
            break
    return r


def nullspace(rows):
    """Basis of the kernel of A over Q (list of length-n vectors)."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    if m == 0:
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    a = [[Fraction(v) for v in row] for row in rows]
    pivots = []
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, m) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        pv = a[r][c]
        a[r] = [v / pv for v in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [v - f * w for v, w in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for row_idx, pc in enumerate(pivots):
            v[pc] = -a[row_idx][fc]
        basis.append(v)
    return basis
