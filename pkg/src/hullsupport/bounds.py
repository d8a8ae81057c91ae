"""Support bounds for integer-hull vertices, evaluated with upward rounding.

All logarithms are base 2.  Every bound is returned as an :class:`HPReal`
holding the upper endpoint of a 128-bit interval enclosure, so comparing an
integer support size against it is a rigorous check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .linalg import bareiss_det, simplex
from .model import IV, HPReal, IntMatrix, Instance, iv, iv_log2

THM4_CONST = Fraction(351, 100)  # 3.51
COR6_CONST = Fraction(12, 5)  # 2.4
HOEFFDING_EXP = Fraction(112, 100)  # 1.12
LEM11_CONST = Fraction(424, 100)  # 4.24
COR12_CONST = 24
THM21_CONST = Fraction(23514, 10000)  # c' / c

ROOT_TOL = Fraction(1, 2**70)

TAGS = (
    "Pigeonhole.knapsack",
    "Thm4",
    "Lem5",
    "Lem5.closed",
    "Cor6",
    "Thm9.Gamma",
    "Thm9",
    "Lem11",
    "Cor12",
    "Lem15",
    "Pigeonhole.general",
    "Related.simple",
    "Related.n",
    "Lem18",
    "Lem19",
    "Count.knapsack",
    "Count.general",
    "Eq2.root",
    "Eq2.integer",
    "Thm20.case1",
    "Thm20.case2",
    "Thm20.case3",
    "Thm20.case4",
    "Thm21",
)


@dataclass(frozen=True)
class BoundEntry:
    tag: str
    value: Optional[HPReal]
    applicable: bool = True
    condition_note: str = ""

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown bound tag {self.tag!r}")


@dataclass
class BoundReport:
    entries: list = field(default_factory=list)

    def add(self, tag, value=None, applicable=True, note=""):
        self.entries.append(BoundEntry(tag, value, applicable, note))
        return self

    def get(self, tag: str) -> BoundEntry:
        for e in self.entries:
            if e.tag == tag:
                return e
        raise KeyError(tag)

    def __contains__(self, tag):
        return any(e.tag == tag for e in self.entries)

    def applicable(self) -> dict:
        return {e.tag: e.value for e in self.entries if e.applicable and e.value is not None}


@dataclass(frozen=True)
class IneqCase:
    case_id: int
    m: int
    cDelta: Fraction
    bound: HPReal


# -- small helpers -----------------------------------------------------------


def _is_pow2(x: Fraction) -> Optional[int]:
    """Exponent k with x == 2**k, else None."""
    x = Fraction(x)
    if x <= 0:
        return None
    p, q = x.numerator, x.denominator
    if q == 1 and p & (p - 1) == 0:
        return p.bit_length() - 1
    if p == 1 and q & (q - 1) == 0:
        return -(q.bit_length() - 1)
    return None


def log2_iv(x):
    """Interval log2 that is exact on powers of two."""
    if isinstance(x, (int, Fraction)):
        k = _is_pow2(Fraction(x))
        if k is not None:
            return IV.mpf(k)
        x = iv(Fraction(x))
    return iv_log2(x)


def _lt(a, b) -> bool:
    """``a < b`` for certain (interval upper end below lower end)."""
    a, b = _as_iv(a), _as_iv(b)
    return a.b < b.a


def _as_iv(x):
    if isinstance(x, (int, Fraction)):
        return iv(Fraction(x))
    return x


def ceil_log2_int(k: int) -> int:
    """Smallest d with 2**d >= k, for k >= 1."""
    return (k - 1).bit_length()


def ceil_up(h: HPReal) -> int:
    return math.ceil(h.value)


def _l1(v) -> int:
    return sum(abs(x) for x in v)


def _restrict(v, S):
    return [v[i] for i in sorted(S)] if S is not None else list(v)


def bisect_increasing(g: Callable, lo: Fraction, hi: Fraction, tol: Fraction = ROOT_TOL):
    """Bracket the root of an increasing interval-valued ``g``.

    Needs g(lo) < 0 < g(hi); returns the final bracket ``(lo, hi)``.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    while g(hi).a <= 0:
        lo, hi = hi, 2 * hi
    g_lo = g(lo)
    if g_lo.a > 0:
        raise ValueError("bracket lower end is above the root")
    if g_lo.b >= 0:
        return lo, lo
    while hi - lo > tol:
        mid = (lo + hi) / 2
        gm = g(mid)
        if gm.b < 0:
            lo = mid
        elif gm.a > 0:
            hi = mid
        else:
            # root sits inside the rounding noise at mid: tighten around it
            if g(mid + tol).a > 0:
                hi = mid + tol
            if g(mid - tol).b < 0:
                lo = mid - tol
            break
    return lo, hi


# -- knapsack (m = 1) ---------------------------------------------------------


def knapsack_pigeonhole(a: Sequence[int]) -> HPReal:
    """log2 ||a||_1 + 1."""
    norm = _l1(a)
    if norm == 0:
        raise ValueError("a must be nonzero")
    return HPReal.up(log2_iv(norm) + 1)


def knapsack_l2_bound(a: Sequence[int], S: Optional[Iterable[int]] = None) -> HPReal:
    """log2(3.51 * ||a[S]||_2) from the exact squared norm."""
    sq = sum(x * x for x in _restrict(a, S))
    if sq == 0:
        raise ValueError("a[S] is empty or zero")
    return HPReal.up(log2_iv(THM4_CONST) + log2_iv(sq) / 2)


def knapsack_delta_bound(Delta: int) -> HPReal:
    if Delta < 1:
        raise ValueError("Delta must be >= 1")
    return HPReal.up(log2_iv(COR6_CONST * Delta) * 3 / 2)


def knapsack_implicit_bound(Delta: int):
    """Largest s with s <= log2(3.51 sqrt(s) Delta), and the closed form
    log2(2 Delta sqrt(1.5 log2(2 Delta))).

    g(s) = s - log2(3.51 sqrt(s) Delta) has g'(s) = 1 - 1/(2 s ln 2) > 0 for
    s >= 1, and g(1) < 0, so the root is bracketed from s = 1.
    """
    if Delta < 1:
        raise ValueError("Delta must be >= 1")
    c = log2_iv(THM4_CONST * Delta)

    def g(s):
        return iv(s) - c - log2_iv(s) / 2

    _, hi = bisect_increasing(g, Fraction(1), Fraction(8) + 2 * Delta.bit_length())
    two_d = log2_iv(2 * Delta)
    closed = two_d + log2_iv(two_d * iv(Fraction(3, 2))) / 2
    return HPReal.up(iv(hi)), HPReal.up(closed)


# -- general m -----------------------------------------------------------------


def general_gamma(A: IntMatrix, S: Optional[Iterable[int]] = None) -> HPReal:
    """1.12 * sum_j ||a^(j)[S]||_2 + sqrt(sum_{i in S} ||A_i||_1^2)."""
    sub = A.restrict(S if S is not None else range(A.n))
    return HPReal.up(_gamma_iv(sub))


def _gamma_iv(sub: IntMatrix):
    rows = IV.mpf(0)
    for j in range(sub.m):
        rows += IV.sqrt(IV.mpf(sub.row_l2_sq(j)))
    cols = sum(sub.col_l1(i) ** 2 for i in range(sub.n))
    return iv(HOEFFDING_EXP) * rows + IV.sqrt(IV.mpf(cols))


def general_supp_bound(A: IntMatrix, S: Optional[Iterable[int]] = None) -> HPReal:
    """m log2(2e Gamma / m + 2e)."""
    sub = A.restrict(S if S is not None else range(A.n))
    m = sub.m
    two_e = 2 * IV.e
    return HPReal.up(m * log2_iv(two_e * _gamma_iv(sub) / m + two_e))


def general_delta_bound(m: int, Delta: int, variant: str = "corollary-24", epsilon=None) -> HPReal:
    """Delta-only forms: ``implicit-root`` (s = m log2(4.24 e sqrt(s) Delta + 2e)),
    ``corollary-24`` (2m log2(24 sqrt(m) Delta)) or ``warmup`` with epsilon."""
    if m < 1 or Delta < 1:
        raise ValueError("need m >= 1 and Delta >= 1")
    if variant == "corollary-24":
        inner = COR12_CONST * IV.sqrt(IV.mpf(m)) * Delta
        return HPReal.up(2 * m * log2_iv(inner))
    if variant == "warmup":
        if epsilon is None or Fraction(epsilon) <= 0:
            raise ValueError("warmup variant needs epsilon > 0")
        eps = Fraction(epsilon)
        inner = (
            iv(LEM11_CONST)
            * IV.e
            * iv(1 + Fraction(1, Delta))
            * IV.sqrt(iv((1 + eps) / (2 * eps)))
            * IV.sqrt(IV.mpf(m))
            * Delta
        )
        return HPReal.up(iv(1 + eps) * m * log2_iv(inner))
    if variant == "implicit-root":
        # g(s) = s - m log2(4.24 e sqrt(s) Delta + 2e); g' = 1 - m*k/(2 ln2 (k s + 2e sqrt s))
        # with k = 4.24 e Delta, which is positive once s >= m
        k = iv(LEM11_CONST) * IV.e * Delta

        def g(s):
            return iv(s) - m * log2_iv(k * IV.sqrt(iv(s)) + 2 * IV.e)

        _, hi = bisect_increasing(g, Fraction(m), Fraction(64 * m + 8 * m * Delta.bit_length()))
        return HPReal.up(iv(hi))
    raise ValueError(f"unknown variant {variant!r}")


def pigeonhole_general(m: int, s: int, Delta: int) -> HPReal:
    """m log2(s Delta + 1)."""
    return HPReal.up(m * log2_iv(s * Delta + 1))


def simple_related(A: IntMatrix, S: Optional[Iterable[int]] = None) -> HPReal:
    """sum_j log2(||a_j[S]||_1 + 1)."""
    sub = A.restrict(S if S is not None else range(A.n))
    total = IV.mpf(0)
    for j in range(sub.m):
        total += log2_iv(sub.row_l1(j) + 1)
    return HPReal.up(total)


def simple_related_n(A: IntMatrix, S: Iterable[int]) -> HPReal:
    """m log2(|S| ||A[S]||_inf + 1), the coarsened form of :func:`simple_related`."""
    sub = A.restrict(S)
    return pigeonhole_general(sub.m, sub.n, sub.inf_norm())


# -- structure bounds ------------------------------------------------------


def structure_distance_exact(a_k: Sequence[int], basis: Sequence[Sequence[int]]) -> Fraction:
    """min over real lambda of ||a_k - sum lambda_i basis_i||_1, as an exact LP.

    Variables (lambda+, lambda-, p, q) >= 0 with
    sum_i (lambda+_i - lambda-_i) basis_i[j] + p_j - q_j = a_k[j], minimising sum(p + q).
    """
    n = len(a_k)
    if any(len(b) != n for b in basis):
        raise ValueError("basis vectors must match a_k in length")
    if not basis:
        return Fraction(_l1(a_k))
    k = len(basis)
    rows = []
    for j in range(n):
        lam = [basis[i][j] for i in range(k)]
        rows.append(lam + [-v for v in lam] + [int(t == j) for t in range(n)] + [-int(t == j) for t in range(n)])
    cost = [0] * (2 * k) + [1] * (2 * n)
    res = simplex(cost, rows, list(a_k))
    return res.value


def structure_distance(a_k: Sequence[int], basis: Sequence[Sequence[int]]) -> HPReal:
    return HPReal.up(structure_distance_exact(a_k, basis))


def structure_product(A: IntMatrix, max_rows: int = 9) -> int:
    """min over row orders of prod_i (ceil(d_i) + 1).

    d_i depends only on the set of rows already placed, so the minimum over
    permutations is a dynamic program over subsets.
    """
    m = A.m
    if m > max_rows:
        raise ValueError(f"{m} rows exceeds the exhaustive-order limit {max_rows}")
    rows = A.rows
    best = {frozenset(): 1}
    for size in range(m):
        nxt = {}
        for placed, prod in best.items():
            basis = [rows[i] for i in sorted(placed)]
            for k in range(m):
                if k in placed:
                    continue
                d = math.ceil(structure_distance_exact(rows[k], basis))
                key = placed | {k}
                val = prod * (d + 1)
                if key not in nxt or val < nxt[key]:
                    nxt[key] = val
        best = nxt
    return best[frozenset(range(m))]


def structure_bound(A: IntMatrix, max_rows: int = 9) -> HPReal:
    """min over row orders of sum_i log2(ceil(d_i) + 1)."""
    return HPReal.up(log2_iv(structure_product(A, max_rows)))


def gram_det(A: IntMatrix) -> int:
    return bareiss_det(A.gram())


def minkowski_bound(A: IntMatrix) -> HPReal:
    """m + m log2 m + (1/2) log2 det(A A^T)."""
    det = gram_det(A)
    if det <= 0:
        raise ValueError("A does not have full row rank")
    m = A.m
    return HPReal.up(m + m * log2_iv(m) + log2_iv(det) / 2)


# -- vertex counts -------------------------------------------------------------


def knapsack_count(n: int, Delta: int) -> int:
    """ell * (n * d)^(ell+1), d = ceil(log2(8(2 Delta + 1))), ell = ceil(Cor 6)."""
    d = ceil_log2_int(8 * (2 * Delta + 1))
    ell = ceil_up(knapsack_delta_bound(Delta))
    return ell * (n * d) ** (ell + 1)


def general_count(n: int, m: int, Delta: int) -> int:
    """n^m * L * n^L * levels^L with L = ceil(2m log2(24 sqrt(m) Delta)) and
    levels = ceil(m log2(m (2 m Delta + 1)))."""
    L = ceil_up(general_delta_bound(m, Delta, "corollary-24"))
    levels = max(1, ceil_up(HPReal.up(m * log2_iv(m * (2 * m * Delta + 1)))))
    return n**m * L * n**L * levels**L


def vertex_count_bounds(n: int, m: int, Delta: int) -> BoundReport:
    if n < 1 or m < 1 or Delta < 1:
        raise ValueError("need n, m, Delta >= 1")
    rep = BoundReport()
    if m == 1:
        rep.add("Count.knapsack", HPReal.up(knapsack_count(n, Delta)))
    else:
        rep.add("Count.knapsack", None, False, "requires m = 1")
    rep.add("Count.general", HPReal.up(general_count(n, m, Delta)))
    return rep


# -- inequality analysis -----------------------------------------------------


def _cdelta(c, Delta) -> Fraction:
    x = Fraction(c) * Fraction(Delta)
    if x < 2:
        raise ValueError("c * Delta must be >= 2")
    return x


def minimal_Y(m: int, cDelta) -> HPReal:
    """Real root Y* of Y - (m/2) log2 Y = m log2(c Delta)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    x = _cdelta(cDelta, 1)
    target = m * log2_iv(x)

    def g(y):
        return iv(y) - m * log2_iv(y) / 2 - target

    lg = math.log2(x)
    # float guesses only; bisect_increasing widens hi and checks lo
    lo = max(Fraction(m), Fraction(math.floor(m * lg) - 1))
    hi = Fraction(math.ceil(m * lg * (1 + lg))) + m
    _, hi = bisect_increasing(g, lo, hi)
    return HPReal.up(iv(hi))


def minimal_Y_integer(m: int, cDelta) -> int:
    """Smallest integer Y with Y - (m/2) log2 Y > m log2(c Delta), decided exactly
    as 4^Y * q^(2m) > Y^m * p^(2m) for c Delta = p/q."""
    x = _cdelta(cDelta, 1)
    p, q = x.numerator, x.denominator
    y = max(1, math.floor(m * math.log2(float(x))) - 1)
    while not (4**y * q ** (2 * m) > y**m * p ** (2 * m)):
        y += 1
    return y


def thm20_case(m: int, cDelta) -> int:
    x = _cdelta(cDelta, 1)
    lg = log2_iv(x)
    rt = IV.sqrt(iv(x))
    if _lt(IV.mpf(m), iv(x) * 2 / (3 * lg)):
        return 1
    if _lt(lg, rt):
        return 2
    if not _lt(rt, iv(Fraction(3 * m, 2))):
        return 3
    return 4


def thm20_case_bound(case_id: int, m: int, cDelta) -> HPReal:
    x = _cdelta(cDelta, 1)
    X = iv(x)
    lg = log2_iv(x)
    if case_id == 1:
        inner = iv(Fraction(3 * m, 2)) * lg
    elif case_id == 2:
        inner = 3 * m * log2_iv(3 * m / IV.sqrt(IV.mpf(2)))
    elif case_id == 3:
        inner = iv(Fraction(3 * m, 2)) * log2_iv(3 * m * lg)
    elif case_id == 4:
        inner = 3 * m * log2_iv(3 * m)
    else:
        raise ValueError("case_id must be 1..4")
    return HPReal.up(m * log2_iv(X * IV.sqrt(inner)))


def ineq_table_bound(m: int, c, Delta) -> IneqCase:
    x = _cdelta(c, Delta)
    case = thm20_case(m, x)
    return IneqCase(case, m, x, thm20_case_bound(case, m, x))


def ineq_uniform_bound(m: int, c, Delta) -> HPReal:
    """(3/2) m log2(2.3514 c Delta sqrt(m))."""
    x = _cdelta(c, Delta)
    return HPReal.up(m * log2_iv(iv(THM21_CONST * x) * IV.sqrt(IV.mpf(m))) * 3 / 2)


def _exact_sqrt(x: Fraction) -> Optional[Fraction]:
    p, q = x.numerator, x.denominator
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


def sqrt_log_crossover(x) -> int:
    """Sign of sqrt(x) - log2(x): -1, 0 or +1."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("x must be positive")
    k, r = _is_pow2(x), _exact_sqrt(x)
    if k is not None and r is not None:
        return (r > k) - (r < k)
    diff = IV.sqrt(iv(x)) - log2_iv(x)
    if diff.a > 0:
        return 1
    if diff.b < 0:
        return -1
    raise ArithmeticError(f"sign of sqrt(x) - log2(x) undecided at x={x}")


# -- aggregate -----------------------------------------------------------------


def full_report(inst: Instance, S: Optional[Iterable[int]] = None, epsilon=1) -> BoundReport:
    """Every applicable bound for ``inst``.

    With ``S`` omitted all columns are used; the support-restricted bounds are
    monotone in the column set, so the result bounds every vertex.
    """
    A = inst.A
    S = sorted(S) if S is not None else list(range(A.n))
    sub = A.restrict(S)
    m, Delta = A.m, A.inf_norm()
    rep = BoundReport()
    if m == 1:
        a = A.row(0)
        rep.add("Pigeonhole.knapsack", knapsack_pigeonhole(_restrict(a, S)))
        rep.add("Thm4", knapsack_l2_bound(a, S))
        root, closed = knapsack_implicit_bound(Delta)
        rep.add("Lem5", root)
        rep.add("Lem5.closed", closed)
        rep.add("Cor6", knapsack_delta_bound(Delta))
    else:
        for tag in ("Pigeonhole.knapsack", "Thm4", "Lem5", "Lem5.closed", "Cor6"):
            rep.add(tag, None, False, "requires m = 1")
    rep.add("Thm9.Gamma", general_gamma(A, S))
    rep.add("Thm9", general_supp_bound(A, S))
    rep.add("Lem11", general_delta_bound(m, Delta, "implicit-root"))
    rep.add("Cor12", general_delta_bound(m, Delta, "corollary-24"))
    rep.add("Lem15", general_delta_bound(m, Delta, "warmup", epsilon), note=f"epsilon={epsilon}")
    rep.add("Pigeonhole.general", pigeonhole_general(m, len(S), Delta))
    rep.add("Related.simple", simple_related(A, S))
    rep.add("Related.n", simple_related_n(A, S))
    try:
        rep.add("Lem18", structure_bound(sub))
    except ValueError as exc:
        rep.add("Lem18", None, False, str(exc))
    try:
        rep.add("Lem19", minkowski_bound(A))
    except ValueError as exc:
        rep.add("Lem19", None, False, str(exc))
    counts = vertex_count_bounds(A.n, m, Delta)
    rep.entries.extend(counts.entries)
    return rep
