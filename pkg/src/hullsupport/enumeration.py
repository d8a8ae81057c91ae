"""Vertex enumeration for integer hulls via proximity boxes.

For every basic feasible solution y of the LP relaxation, the l1-ball of the
proximity radius R around y is cut into dyadic cells indexed by k: coordinate
i ranges over L_i + [0, 1) when k_i = 0 and over L_i + [2^(k_i-1), 2^k_i)
otherwise.  A cell holding a vertex holds no other lattice point, and only
cells with |supp(k)| <= ell (the support bound) can hold a vertex.  Cells
with exactly one lattice point form the candidate pool W; a final exact LP
keeps the points of W that are not convex combinations of the others.
"""

from __future__ import annotations

import itertools
import logging
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .bounds import ceil_log2_int, ceil_up, general_delta_bound, knapsack_delta_bound
from .certify import hull_vertices
from .linalg import bareiss_det, solve
from .model import Instance, IntPoint

log = logging.getLogger(__name__)

DESK_LIMITS = {"n": 12, "m": 3, "Delta": 64}


class BudgetRefused(RuntimeError):
    pass


@dataclass(frozen=True)
class BoxDescriptor:
    k: tuple
    L: tuple
    d: int

    def cell(self, i: int) -> tuple:
        """Integer range [lo, hi] of coordinate i."""
        ki, Li = self.k[i], self.L[i]
        if ki == 0:
            return Li, Li
        return Li + (1 << (ki - 1)), Li + (1 << ki) - 1

    def contains(self, x: Sequence[int]) -> bool:
        return all(lo <= v <= hi for v, (lo, hi) in zip(x, map(self.cell, range(len(self.k)))))

    def free(self) -> list:
        return [i for i, ki in enumerate(self.k) if ki]


@dataclass
class HullResult:
    vertices: frozenset
    candidates_considered: int = 0
    boxes_probed: int = 0
    bfs_used: int = 0
    status: str = "ok"
    warnings: list = field(default_factory=list)
    discarded_multi: list = field(default_factory=list)


# -- LP side ---------------------------------------------------------------


def enumerate_bfs(inst: Instance) -> list:
    """All basic feasible solutions of {Ax = b, x >= 0}, deduplicated."""
    A, m, n = inst.A, inst.m, inst.n
    if m > n:
        raise ValueError("need m <= n")
    found = []
    seen = set()
    for B in itertools.combinations(range(n), m):
        sub = [[A.rows[j][i] for i in B] for j in range(m)]
        if bareiss_det(sub) == 0:
            continue
        xb = solve(sub, inst.b)
        if any(v < 0 for v in xb):
            continue
        x = [Fraction(0)] * n
        for i, v in zip(B, xb):
            x[i] = v
        key = tuple(x)
        if key not in seen:
            seen.add(key)
            found.append(key)
    return found


def proximity_radius(inst: Instance) -> int:
    m, Delta = inst.m, inst.delta
    if Delta < 1:
        raise ValueError("Delta must be >= 1")
    if m == 1:
        return 2 * Delta + 1
    return m * (2 * m * Delta + 1) ** m


def support_limit(m: int, Delta: int) -> int:
    if m == 1:
        return ceil_up(knapsack_delta_bound(Delta))
    return ceil_up(general_delta_bound(m, Delta, "corollary-24"))


def grid_depth(R: int) -> int:
    return ceil_log2_int(8 * R)


def _dist(y: Fraction, lo: int, hi: int) -> Fraction:
    if y < lo:
        return lo - y
    if y > hi:
        return y - hi
    return Fraction(0)


def _cells(Li: int, d: int):
    yield 0, Li, Li
    for k in range(1, d + 1):
        yield k, Li + (1 << (k - 1)), Li + (1 << k) - 1


def box_grid(y: Sequence, R: int, ell: int, inst: Optional[Instance] = None) -> Iterator[BoxDescriptor]:
    """Descriptors with entries in [0, d], support <= ell, whose cell meets
    the l1-ball of radius R around y.

    With ``inst`` given, cells whose interval image cannot meet Ax = b are
    pruned as well (they contain no lattice point of P).
    """
    n = len(y)
    y = [Fraction(v) for v in y]
    d = grid_depth(R)
    L = tuple(max(math.ceil(v - R), 0) for v in y)
    options = []
    for i in range(n):
        opts = [(k, lo, hi, _dist(y[i], lo, hi)) for k, lo, hi in _cells(L[i], d)]
        options.append([o for o in opts if o[3] <= R])
    min_rest = [Fraction(0)] * (n + 1)
    for i in range(n - 1, -1, -1):
        min_rest[i] = min_rest[i + 1] + min(o[3] for o in options[i])

    if inst is not None:
        rows, b, m = inst.A.rows, inst.b, inst.m
        full = [(L[i], max(o[2] for o in options[i])) for i in range(n)]

        def rest_range(k, j, budget_left):
            lo = hi = 0
            for i in range(k, n):
                a = rows[j][i]
                top = full[i][1] if budget_left > 0 else L[i]
                lo += min(a * L[i], a * top)
                hi += max(a * L[i], a * top)
            return lo, hi

    k_vec = [0] * n

    def rec(i, dist, used, partial):
        if inst is not None:
            for j in range(m):
                lo, hi = rest_range(i, j, ell - used)
                if not (partial[j][0] + lo <= b[j] <= partial[j][1] + hi):
                    return
        if i == n:
            yield BoxDescriptor(tuple(k_vec), L, d)
            return
        for k, lo, hi, dd in options[i]:
            if k and used >= ell:
                break
            if dist + dd + min_rest[i + 1] > R:
                continue
            k_vec[i] = k
            nxt = partial
            if inst is not None:
                nxt = [
                    (p0 + min(rows[j][i] * lo, rows[j][i] * hi), p1 + max(rows[j][i] * lo, rows[j][i] * hi))
                    for j, (p0, p1) in enumerate(partial)
                ]
            yield from rec(i + 1, dist + dd, used + (k != 0), nxt)
        k_vec[i] = 0

    start = [(0, 0)] * (inst.m if inst is not None else 0)
    yield from rec(0, Fraction(0), 0, start)


def count_limit(n: int, d: int, ell: int) -> int:
    """sum_{j <= ell} C(n, j) d^j."""
    return sum(math.comb(n, j) * d**j for j in range(min(ell, n) + 1))


# -- integer search inside one cell --------------------------------------------


def _propagate(rows, b, lo, hi) -> bool:
    """Tighten integer bounds from every equality row; False if empty."""
    changed = True
    while changed:
        changed = False
        for row, bj in zip(rows, b):
            mins = [min(a * lo[i], a * hi[i]) for i, a in enumerate(row)]
            maxs = [max(a * lo[i], a * hi[i]) for i, a in enumerate(row)]
            smin, smax = sum(mins), sum(maxs)
            if not smin <= bj <= smax:
                return False
            for i, a in enumerate(row):
                if a == 0 or lo[i] == hi[i]:
                    continue
                # a * x_i in [bj - (smax - maxs[i]), bj - (smin - mins[i])]
                rlo = bj - (smax - maxs[i])
                rhi = bj - (smin - mins[i])
                if a > 0:
                    nlo, nhi = _ceil_div(rlo, a), rhi // a
                else:
                    nlo, nhi = _ceil_div(rhi, a), rlo // a
                if nlo > lo[i]:
                    lo[i] = nlo
                    changed = True
                if nhi < hi[i]:
                    hi[i] = nhi
                    changed = True
                if lo[i] > hi[i]:
                    return False
    return True


def _ceil_div(p: int, q: int) -> int:
    return -((-p) // q)


def _search(rows, b, lo, hi) -> Optional[tuple]:
    lo, hi = list(lo), list(hi)
    if not _propagate(rows, b, lo, hi):
        return None
    free = [i for i in range(len(lo)) if lo[i] < hi[i]]
    if not free:
        x = tuple(lo)
        if all(sum(a * v for a, v in zip(row, x)) == bj for row, bj in zip(rows, b)):
            return x
        return None
    i = min(free, key=lambda t: hi[t] - lo[t])
    for v in range(lo[i], hi[i] + 1):
        lo2, hi2 = list(lo), list(hi)
        lo2[i] = hi2[i] = v
        found = _search(rows, b, lo2, hi2)
        if found is not None:
            return found
    return None


def box_integer_search(inst: Instance, box: BoxDescriptor, mode: str = "find-one",
                       x_star: Optional[Sequence[int]] = None, index: Optional[int] = None,
                       direction: Optional[str] = None) -> Optional[IntPoint]:
    """A lattice point of P inside the cell, or None.

    ``find-second`` adds x_index <= x_star[index] - 1 (direction ``below``)
    or x_index >= x_star[index] + 1 (direction ``above``).
    """
    n = inst.n
    lo = [box.cell(i)[0] for i in range(n)]
    hi = [box.cell(i)[1] for i in range(n)]
    if mode == "find-second":
        if direction == "below":
            hi[index] = min(hi[index], x_star[index] - 1)
        elif direction == "above":
            lo[index] = max(lo[index], x_star[index] + 1)
        else:
            raise ValueError("direction must be 'below' or 'above'")
        if lo[index] > hi[index]:
            return None
    elif mode != "find-one":
        raise ValueError(f"unknown mode {mode!r}")
    found = _search(inst.A.rows, inst.b, lo, hi)
    return IntPoint(found) if found is not None else None


def probe_box(inst: Instance, box: BoxDescriptor):
    """(point, n_probes) if the cell holds exactly one lattice point, else
    (None, n_probes) with point count 0 or >= 2 encoded in the second field's sign."""
    first = box_integer_search(inst, box)
    if first is None:
        return None, 0
    for i in box.free():
        for direction in ("below", "above"):
            if box_integer_search(inst, box, "find-second", first, i, direction) is not None:
                return None, 2
    return first, 1


# -- driver ------------------------------------------------------------------


def _grid_worker(args):
    inst, y, R, ell, max_boxes = args
    singles, multi, probed = [], [], 0
    cap = count_limit(inst.n, grid_depth(R), ell)
    for box in box_grid(y, R, ell, inst):
        probed += 1
        if max_boxes is not None and probed > max_boxes:
            raise BudgetRefused(f"more than {max_boxes} boxes for one BFS")
        point, kind = probe_box(inst, box)
        if kind == 1:
            singles.append(point)
        elif kind == 2:
            multi.append(box)
    assert probed <= cap, "box count exceeds the low-support grid size"
    return singles, multi, probed


def enumerate_vertices(inst: Instance, workers: int = 1, max_boxes: Optional[int] = None,
                       enforce_limits: bool = True, keep_discarded: bool = False) -> HullResult:
    """All vertices of the integer hull of {Ax = b, x >= 0}."""
    Delta = inst.delta
    if enforce_limits and (inst.n > DESK_LIMITS["n"] or inst.m > DESK_LIMITS["m"] or Delta > DESK_LIMITS["Delta"]):
        raise BudgetRefused(
            f"instance n={inst.n}, m={inst.m}, Delta={Delta} exceeds desk limits {DESK_LIMITS}"
        )
    notes = []
    if inst.m >= 2 and _maybe_unbounded(inst):
        msg = "P may be unbounded; the convex-combination filter ignores recession directions"
        warnings.warn(msg)
        notes.append(msg)
    bfs = enumerate_bfs(inst)
    if not bfs:
        return HullResult(frozenset(), status="infeasible", warnings=notes)
    R = proximity_radius(inst)
    ell = support_limit(inst.m, Delta)
    jobs = [(inst, y, R, ell, max_boxes) for y in bfs]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_grid_worker, jobs))
    else:
        results = [_grid_worker(j) for j in jobs]
    W = set()
    probed = 0
    discarded = []
    for singles, multi, count in results:
        W.update(tuple(p) for p in singles)
        probed += count
        if keep_discarded:
            discarded.extend(multi)
    verts = hull_vertices(W)
    log.debug("bfs=%d boxes=%d candidates=%d vertices=%d", len(bfs), probed, len(W), len(verts))
    status = "ok" if verts else "infeasible"
    return HullResult(verts, len(W), probed, len(bfs), status, notes, discarded)


def _maybe_unbounded(inst: Instance) -> bool:
    from .oracle import derive_var_bounds

    mixed = any(min(col) < 0 < max(col) for col in inst.A.columns())
    return mixed and derive_var_bounds(inst) is None
