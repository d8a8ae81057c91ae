"""Brute-force ground truth: all lattice points of P and the exact vertex set of P_I."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .certify import is_vertex_exact, on_open_segment
from .linalg import simplex
from .model import Instance, IntPoint

DEFAULT_MAX_POINTS = 1_000_000


class OracleError(RuntimeError):
    pass


class BudgetExceeded(OracleError):
    pass


@dataclass(frozen=True)
class LatticeCloud:
    points: frozenset
    bounds_used: tuple
    complete: bool


def _row_sign_bound(inst: Instance, i: int) -> Optional[int]:
    best = None
    for row, bj in zip(inst.A.rows, inst.b):
        if row[i] > 0 and all(v >= 0 for v in row):
            cand = bj // row[i]
        elif row[i] < 0 and all(v <= 0 for v in row):
            cand = (-bj) // (-row[i])
        else:
            continue
        best = cand if best is None else min(best, cand)
    return best


def derive_var_bounds(inst: Instance) -> Optional[tuple]:
    """Upper bounds valid for every point of P, or ``None`` if some variable
    is unbounded over P.

    A same-sign row gives x_i <= b_j / A_ji directly; other variables are
    bounded by maximising x_i with the exact simplex.  An infeasible P gets
    all-zero bounds.
    """
    n = inst.n
    bounds = []
    for i in range(n):
        ub = _row_sign_bound(inst, i)
        if ub is None:
            cost = [0] * n
            cost[i] = -1
            res = simplex(cost, inst.A.rows, inst.b)
            if res.status == "infeasible":
                return (0,) * n
            if res.status == "unbounded":
                return None
            ub = int(-res.value // 1)
        bounds.append(max(ub, 0) if ub is not None else 0)
    return tuple(bounds)


def enumerate_lattice(inst: Instance, max_points: int = DEFAULT_MAX_POINTS) -> LatticeCloud:
    """Every integer x with Ax = b and 0 <= x <= bounds, by DFS with interval pruning."""
    derived = derive_var_bounds(inst)
    if derived is not None:
        bounds, complete = derived, True
        if inst.var_upper_bounds is not None:
            bounds = tuple(min(a, b) for a, b in zip(derived, inst.var_upper_bounds))
    elif inst.var_upper_bounds is not None:
        bounds, complete = inst.var_upper_bounds, False
    else:
        raise OracleError("P may be unbounded and no var_upper_bounds were given")

    b, n, m = inst.b, inst.n, inst.m
    # large columns first, so the small ones absorb what is left
    order = sorted(range(n), key=lambda i: -sum(abs(v) for v in inst.A.col(i)))
    A = [[row[i] for i in order] for row in inst.A.rows]
    ub = [bounds[i] for i in order]
    # suffix min/max and gcd of each row over the remaining coordinates
    lo_suf = [[0] * m for _ in range(n + 1)]
    hi_suf = [[0] * m for _ in range(n + 1)]
    g_suf = [[0] * m for _ in range(n + 1)]
    for k in range(n - 1, -1, -1):
        for j in range(m):
            a = A[j][k] * ub[k]
            lo_suf[k][j] = lo_suf[k + 1][j] + min(0, a)
            hi_suf[k][j] = hi_suf[k + 1][j] + max(0, a)
            g_suf[k][j] = math.gcd(g_suf[k + 1][j], A[j][k] if ub[k] else 0)

    points = []
    x = [0] * n

    def rec(k, rem):
        for j in range(m):
            g = g_suf[k][j]
            if (rem[j] % g if g else rem[j]):
                return
        if k == n:
            if not any(rem):
                p = [0] * n
                for pos, i in enumerate(order):
                    p[i] = x[pos]
                points.append(IntPoint(p))
                if len(points) > max_points:
                    raise BudgetExceeded(f"more than {max_points} lattice points")
            return
        # values of x_k that keep every row reachable by the later coordinates
        vlo, vhi = 0, ub[k]
        for j in range(m):
            a = A[j][k]
            lo_r, hi_r = rem[j] - hi_suf[k + 1][j], rem[j] - lo_suf[k + 1][j]
            if a > 0:
                vlo, vhi = max(vlo, -((-lo_r) // a)), min(vhi, hi_r // a)
            elif a < 0:
                vlo, vhi = max(vlo, -((-hi_r) // a)), min(vhi, lo_r // a)
            elif not lo_r <= 0 <= hi_r:
                return
        for v in range(vlo, vhi + 1):
            nxt = [r - A[j][k] * v for j, r in enumerate(rem)]
            if all(lo_suf[k + 1][j] <= nxt[j] <= hi_suf[k + 1][j] for j in range(m)):
                x[k] = v
                rec(k + 1, nxt)
        x[k] = 0

    rec(0, list(b))
    return LatticeCloud(frozenset(points), tuple(bounds), complete)


def points_below(inst: Instance, c: Sequence[int], budget: int, max_points: int = DEFAULT_MAX_POINTS) -> list:
    """Every lattice point of P with c.x <= budget, for c > 0 entrywise.

    Finite for any P because c > 0 and x >= 0 bound each coordinate by
    budget // c_i.
    """
    if any(ci <= 0 for ci in c):
        raise ValueError("c must be positive")
    n, m = inst.n, inst.m
    # large columns first: they have few admissible values and fix most of b
    order = sorted(range(n), key=lambda i: -sum(abs(v) for v in inst.A.col(i)) / c[i])
    A = [[row[i] for i in order] for row in inst.A.rows]
    cc = [c[i] for i in order]
    out = []
    x = [0] * n

    def rec(k, rem, left):
        if k == n:
            if not any(rem):
                p = [0] * n
                for pos, i in enumerate(order):
                    p[i] = x[pos]
                out.append(IntPoint(p))
                if len(out) > max_points:
                    raise BudgetExceeded(f"more than {max_points} lattice points")
            return
        # with c.x <= left still allowed, row j can move by at most left * max_t |A_jt| / c_t
        for j in range(m):
            reach = max(abs(A[j][t]) * left // cc[t] for t in range(k, n))
            if abs(rem[j]) > reach and all(A[j][t] * rem[j] >= 0 for t in range(k, n)):
                return
            if rem[j] and all(A[j][t] == 0 for t in range(k, n)):
                return
        for v in range(left // cc[k] + 1):
            x[k] = v
            rec(k + 1, [r - A[j][k] * v for j, r in enumerate(rem)], left - cc[k] * v)
        x[k] = 0

    rec(0, list(inst.b), budget)
    return out


def exposed_by(inst: Instance, w: Sequence[int], c: Sequence[int]) -> bool:
    """True iff w is the unique minimiser of c.x over the lattice points of P.

    A unique optimum is an exposed point of the integer hull, hence a vertex.
    Needs c > 0; only points with c.x <= c.w are visited.
    """
    w = tuple(w)
    budget = sum(ci * wi for ci, wi in zip(c, w))
    pts = points_below(inst, c, budget)
    return [tuple(p) for p in pts] == [w]


def _midpoint_refuted(p, cloud_set) -> bool:
    # p is the midpoint of p - x and p + x for some nonzero x in {-1,0,1}^supp(p)
    S = [i for i, v in enumerate(p) if v]
    for signs in itertools.product((0, 1, -1), repeat=len(S)):
        nz = next((s for s in signs if s), 0)
        if nz != 1:
            continue
        q = list(p)
        r = list(p)
        for i, s in zip(S, signs):
            q[i] += s
            r[i] -= s
        if tuple(q) in cloud_set and tuple(r) in cloud_set:
            return True
    return False


def hull_vertices_oracle(cloud: LatticeCloud, prefilter: bool = True, require_complete: bool = True) -> frozenset:
    """The vertices of conv(cloud), each decided by the exact vertex LP.

    With ``prefilter`` the LP runs against the survivors of two cheap tests
    (midpoint of two cloud points, interior of a segment between two
    survivors) instead of the whole cloud; every vertex survives both, and
    conv(survivors) = conv(cloud), so the answer is unchanged.
    """
    if require_complete and not cloud.complete:
        raise OracleError("lattice cloud is not provably complete")
    pts = cloud.points
    if prefilter and len(pts) > 1:
        cloud_set = {tuple(p) for p in pts}
        pool = [p for p in pts if not _midpoint_refuted(p, cloud_set)]
        inner = on_open_segment(pool)
        pool = [p for p in pool if tuple(p) not in inner]
    else:
        pool = list(pts)
    return frozenset(p for p in pool if is_vertex_exact(pool, p))


def min_support_optimum(inst: Instance, c: Sequence[int], cloud: Optional[LatticeCloud] = None, maximize: bool = False):
    """An optimal lattice point of minimal support and that support size."""
    if cloud is None:
        cloud = enumerate_lattice(inst)
    if not cloud.points:
        raise OracleError("instance is infeasible")
    if not cloud.complete:
        raise OracleError("lattice cloud is not provably complete")
    sign = -1 if maximize else 1
    scored = [(sign * sum(ci * xi for ci, xi in zip(c, p)), len(p.support()), tuple(p)) for p in cloud.points]
    best_val = min(s[0] for s in scored)
    _, size, point = min(s for s in scored if s[0] == best_val)
    return IntPoint(point), size
