"""Exact rational linear algebra and a two-phase simplex with Bland's rule."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence


def bareiss_det(M: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by fraction-free elimination."""
    a = [list(map(int, r)) for r in M]
    n = len(a)
    if n == 0:
        return 1
    if any(len(r) != n for r in a):
        raise ValueError("matrix is not square")
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rank(M: Sequence[Sequence]) -> int:
    a = [[Fraction(v) for v in r] for r in M]
    if not a:
        return 0
    rows, cols = len(a), len(a[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == rows:
            break
    return r


def solve(M: Sequence[Sequence], rhs: Sequence) -> Optional[list]:
    """Solve a square system exactly; ``None`` if singular."""
    n = len(M)
    a = [[Fraction(v) for v in r] + [Fraction(rhs[i])] for i, r in enumerate(M)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return None
        a[c], a[piv] = a[piv], a[c]
        p = a[c][c]
        a[c] = [x / p for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [a[i][n] for i in range(n)]


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: Optional[list] = None
    value: Optional[Fraction] = None


class _Tableau:
    # rows: constraint rows with rhs last; basis[i] = column basic in row i
    def __init__(self, rows, basis):
        self.rows = rows
        self.basis = basis

    def pivot(self, r, c, extra=()):
        row = self.rows[r]
        p = row[c]
        if p != 1:
            row = [v / p for v in row]
            self.rows[r] = row
        nz = [(j, v) for j, v in enumerate(row) if v]
        for other in [*self.rows, *extra]:
            if other is row:
                continue
            f = other[c]
            if f:
                for j, v in nz:
                    other[j] -= f * v
        self.basis[r] = c

    def optimize(self, cost, allowed):
        """Minimise ``cost`` over the current basis.

        Dantzig pricing until a run of degenerate pivots, then Bland's
        smallest-index rule for the rest of the solve, which cannot cycle.
        """
        ncols = len(cost)
        # reduced costs, kept up to date by pivoting; last entry is -objective
        red = list(cost) + [Fraction(0)]
        for b, row in zip(self.basis, self.rows):
            if red[b]:
                f = red[b]
                red = [v - f * w for v, w in zip(red, row)]
        bland, degenerate = False, 0
        while True:
            entering = None
            for j in range(ncols):
                if j not in allowed or red[j] >= 0:
                    continue
                if bland:
                    entering = j
                    break
                if entering is None or red[j] < red[entering]:
                    entering = j
            if entering is None:
                return "optimal"
            leave, best = None, None
            for i, row in enumerate(self.rows):
                if row[entering] > 0:
                    ratio = row[-1] / row[entering]
                    if best is None or ratio < best or (ratio == best and self.basis[i] < self.basis[leave]):
                        leave, best = i, ratio
            if leave is None:
                return "unbounded"
            if best == 0:
                degenerate += 1
                bland = bland or degenerate > 20
            else:
                degenerate = 0
            self.pivot(leave, entering, (red,))


def simplex(c: Sequence, A_eq: Sequence[Sequence], b_eq: Sequence) -> LPResult:
    """Minimise ``c.x`` subject to ``A_eq x = b_eq``, ``x >= 0`` in exact arithmetic.

    Two-phase tableau simplex; Bland's smallest-index rule for both entering
    and leaving variables, so degenerate problems terminate without perturbation.
    """
    m = len(A_eq)
    n = len(c)
    rows = []
    for i in range(m):
        r = [Fraction(v) for v in A_eq[i]]
        rhs = Fraction(b_eq[i])
        if rhs < 0:
            r = [-v for v in r]
            rhs = -rhs
        art = [Fraction(int(k == i)) for k in range(m)]
        rows.append(r + art + [rhs])
    tab = _Tableau(rows, [n + i for i in range(m)])
    phase1 = [Fraction(0)] * n + [Fraction(1)] * m
    tab.optimize(phase1, allowed=set(range(n + m)))
    infeas = sum(row[-1] for b, row in zip(tab.basis, tab.rows) if b >= n)
    if infeas > 0:
        return LPResult("infeasible")
    # drive zero-level artificials out of the basis where possible
    for i in range(m):
        if tab.basis[i] >= n:
            col = next((j for j in range(n) if tab.rows[i][j] != 0), None)
            if col is not None:
                tab.pivot(i, col)
    keep = [i for i in range(m) if tab.basis[i] < n]
    tab.rows = [[*tab.rows[i][:n], tab.rows[i][-1]] for i in keep]
    tab.basis = [tab.basis[i] for i in keep]
    cost = [Fraction(v) for v in c]
    status = tab.optimize(cost, allowed=set(range(n)))
    if status == "unbounded":
        return LPResult("unbounded")
    x = [Fraction(0)] * n
    for b, row in zip(tab.basis, tab.rows):
        x[b] = row[-1]
    return LPResult("optimal", x, sum(ci * xi for ci, xi in zip(cost, x)))


def feasible(A_eq: Sequence[Sequence], b_eq: Sequence) -> Optional[list]:
    """A point of ``{A_eq x = b_eq, x >= 0}`` or ``None``."""
    res = simplex([0] * (len(A_eq[0]) if A_eq else 0), A_eq, b_eq)
    return res.x if res.status == "optimal" else None
