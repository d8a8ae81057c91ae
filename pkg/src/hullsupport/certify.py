"""Kernel certificates that refute vertexhood, and the exact vertex LP.

A nonzero x in {-1, 0, 1}^n supported on supp(v) with Ax = 0 shows that v is
the midpoint of the two lattice points v - x and v + x, hence not a vertex of
the integer hull.  The absence of such an x is only a necessary condition.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .linalg import feasible
from .model import Instance, IntPoint, residual

MAX_SUPPORT = 25
MITM_THRESHOLD = 15


@dataclass(frozen=True)
class KernelWitness:
    x: IntPoint


@dataclass(frozen=True)
class NoWitness:
    """The candidate passes the necessary condition; it is *not* proven a vertex."""

    support_size: int


def _columns(inst: Instance, S):
    return [inst.A.col(i) for i in S]


def _dfs_witness(cols, m) -> Optional[tuple]:
    """Depth-first search over {-1,0,1}^s with residual pruning.

    The first nonzero entry is fixed to +1 to skip the mirror image -x.
    """
    s = len(cols)
    # remaining[k][j] = sum of |col[t][j]| over t >= k
    remaining = [[0] * m for _ in range(s + 1)]
    for k in range(s - 1, -1, -1):
        remaining[k] = [r + abs(c) for r, c in zip(remaining[k + 1], cols[k])]
    x = [0] * s

    def rec(k, partial, started):
        if any(abs(p) > r for p, r in zip(partial, remaining[k])):
            return False
        if k == s:
            return started and not any(partial)
        choices = (1, -1, 0) if started else (1, 0)
        for v in choices:
            x[k] = v
            nxt = [p + v * c for p, c in zip(partial, cols[k])] if v else partial
            if rec(k + 1, nxt, started or v != 0):
                return True
        x[k] = 0
        return False

    if rec(0, [0] * m, False):
        return tuple(x)
    return None


def _mitm_witness(cols, m) -> Optional[tuple]:
    """Meet in the middle: hash A x1 over the first half, probe -A x2."""
    s = len(cols)
    h = s // 2
    left, right = cols[:h], cols[h:]
    table = {}
    zero_nonzero = None
    for x1 in itertools.product((-1, 0, 1), repeat=h):
        key = tuple(sum(v * c[j] for v, c in zip(x1, left)) for j in range(m))
        if key not in table:
            table[key] = x1
        if zero_nonzero is None and any(x1) and not any(key):
            zero_nonzero = x1
    if zero_nonzero is not None:
        return zero_nonzero + (0,) * (s - h)
    for x2 in itertools.product((-1, 0, 1), repeat=s - h):
        if not any(x2):
            continue
        key = tuple(-sum(v * c[j] for v, c in zip(x2, right)) for j in range(m))
        x1 = table.get(key)
        if x1 is not None:
            return x1 + x2
    return None


def kernel_certificate(inst: Instance, v: Sequence[int], method: str = "auto"):
    """Search for a kernel witness on supp(v).

    Returns :class:`KernelWitness` (v is provably not a vertex) or
    :class:`NoWitness`.  ``method`` is ``auto``, ``dfs`` or ``mitm``.
    """
    v = IntPoint(v)
    if len(v) != inst.n:
        raise ValueError(f"point has length {len(v)}, expected {inst.n}")
    if not v.is_nonnegative() or any(residual(inst.A, inst.b, v)):
        raise ValueError("point is not feasible for Ax = b, x >= 0")
    S = sorted(v.support())
    if len(S) > MAX_SUPPORT:
        raise ValueError(f"support {len(S)} exceeds search budget {MAX_SUPPORT}")
    if not S:
        return NoWitness(0)
    cols = _columns(inst, S)
    if method == "auto":
        method = "dfs" if len(S) <= MITM_THRESHOLD else "mitm"
    if method == "dfs":
        found = _dfs_witness(cols, inst.m)
    elif method == "mitm":
        found = _mitm_witness(cols, inst.m)
    else:
        raise ValueError(f"unknown method {method!r}")
    if found is None:
        return NoWitness(len(S))
    x = [0] * inst.n
    for i, val in zip(S, found):
        x[i] = val
    return KernelWitness(IntPoint(x))


def is_vertex_exact(points: Sequence[Sequence[int]], w: Sequence[int]) -> bool:
    """True iff ``w`` is not a convex combination of the other points.

    Phase-1 exact simplex on: sum lambda_p p = w, sum lambda_p = 1, lambda >= 0.
    """
    w = tuple(w)
    others = sorted({tuple(p) for p in points} - {w})
    if not others:
        return True
    n = len(w)
    rows = [[p[j] for p in others] for j in range(n)]
    rows.append([1] * len(others))
    return feasible(rows, list(w) + [1]) is None


def _primitive(d):
    g = 0
    for v in d:
        g = math.gcd(g, v)
    return tuple(v // g for v in d)


def on_open_segment(points: Sequence[Sequence[int]]) -> set:
    """Points lying strictly between two other points of the set.

    p is such a point iff some primitive direction from p to another point
    occurs together with its negation.  None of them is a vertex of the
    convex hull, and dropping all of them leaves the hull unchanged.
    """
    pts = sorted({tuple(p) for p in points})
    inner = set()
    for p in pts:
        dirs = set()
        for q in pts:
            if q is p:
                continue
            d = _primitive([a - b for a, b in zip(q, p)])
            if tuple(-v for v in d) in dirs:
                inner.add(p)
                break
            dirs.add(d)
    return inner


def hull_vertices(points: Sequence[Sequence[int]]) -> frozenset:
    """Vertices of conv(points): segment pre-pass, then the exact LP on the rest."""
    pts = {tuple(p) for p in points}
    pool = sorted(pts - on_open_segment(pts))
    return frozenset(IntPoint(w) for w in pool if is_vertex_exact(pool, w))
