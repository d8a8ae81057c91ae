"""Tail bounds for sums of bounded random vectors, their Monte Carlo check,
and the numerical constants 1.12 and 3.51.

Random words come from numpy's Philox counter-based generator keyed by
(seed, replicate); word i of a replicate drives variable i, so every
replicate is reproducible on its own and results do not depend on how
replicates are split across workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .bounds import HOEFFDING_EXP
from .model import EXACT, HPReal, IV, iv

LAWS = ("two-point", "uniform")
MIN_SAMPLES = 10_000
GOLDEN_TOL = 1e-8


@dataclass(frozen=True)
class BoundedVectorFamily:
    """n independent random vectors Y_i in R^m with Y_i[j] in [lower[i][j], upper[i][j]].

    ``two-point``: Y_i = mid_i + s_i * half_i with a single fair sign s_i per
    variable.  ``uniform``: every coordinate uniform on its interval.  Both
    laws have mean mid_i.
    """

    lower: tuple
    upper: tuple
    law: str = "two-point"

    def __post_init__(self):
        lo = tuple(tuple(Fraction(v) for v in r) for r in self.lower)
        hi = tuple(tuple(Fraction(v) for v in r) for r in self.upper)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)
        if self.law not in LAWS:
            raise ValueError(f"unknown law {self.law!r}")
        if len(lo) != len(hi) or not lo:
            raise ValueError("lower and upper need the same positive number of rows")
        m = len(lo[0])
        for a, b in zip(lo, hi):
            if len(a) != m or len(b) != m:
                raise ValueError("ragged box matrix")
            if any(x > y for x, y in zip(a, b)):
                raise ValueError("lower bound exceeds upper bound")

    @classmethod
    def symmetric(cls, n: int, m: int, half=Fraction(1, 2), law: str = "two-point"):
        h = Fraction(half)
        return cls(((-h,) * m,) * n, ((h,) * m,) * n, law)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], law: str = "two-point"):
        """The process behind the general support bound: Y_i = +-A_i / 2."""
        lo = tuple(tuple(-Fraction(abs(v), 2) for v in c) for c in columns)
        hi = tuple(tuple(Fraction(abs(v), 2) for v in c) for c in columns)
        return cls(lo, hi, law)

    @property
    def n(self) -> int:
        return len(self.lower)

    @property
    def m(self) -> int:
        return len(self.lower[0])

    def mean(self) -> tuple:
        return tuple(
            sum((self.lower[i][j] + self.upper[i][j]) / 2 for i in range(self.n)) for j in range(self.m)
        )

    def widths(self) -> list:
        return [[u - l for l, u in zip(lr, ur)] for lr, ur in zip(self.lower, self.upper)]


@dataclass(frozen=True)
class TailReport:
    delta_grid: tuple
    empirical: tuple  # frequencies
    stderr: tuple
    theoretical: tuple
    samples: int
    seed: int
    threshold: HPReal
    denominator: HPReal
    mean_deviation: float = 0.0
    mean_deviation_stderr: float = 0.0

    def violations(self, k: float = 3.0) -> list:
        return [
            i for i, (e, s, t) in enumerate(zip(self.empirical, self.stderr, self.theoretical))
            if e > float(t) + k * s
        ]


# -- closed-form bounds --------------------------------------------------------


def hoeffding_vector_threshold(fam: BoundedVectorFamily):
    """(T, D): Pr[||Y - mu||_1 >= T + delta] <= 2 exp(-2 delta^2 / D)."""
    w = fam.widths()
    D = sum(sum(row) ** 2 for row in w)
    col_sq = [sum(w[i][j] ** 2 for i in range(fam.n)) for j in range(fam.m)]
    if all(c == 0 for c in col_sq):
        return HPReal(Fraction(0), EXACT), HPReal(D, EXACT)
    T = iv(HOEFFDING_EXP) * sum((IV.sqrt(iv(c)) for c in col_sq), IV.mpf(0))
    return HPReal.up(T), HPReal(D, EXACT)


def _two_exp(delta, denom) -> HPReal:
    delta, denom = Fraction(delta), Fraction(denom)
    if delta < 0:
        raise ValueError("delta must be >= 0")
    if delta == 0:
        return HPReal(Fraction(2), EXACT)
    if denom == 0:
        return HPReal(Fraction(0), EXACT)
    return HPReal.up(2 * IV.exp(-2 * iv(delta) ** 2 / iv(denom)))


def scalar_hoeffding_bound(box_widths: Sequence, delta) -> HPReal:
    return _two_exp(delta, sum(Fraction(w) ** 2 for w in box_widths))


def mcdiarmid_bound(c_list: Sequence, delta) -> HPReal:
    if any(Fraction(c) < 0 for c in c_list):
        raise ValueError("c_i must be >= 0")
    return _two_exp(delta, sum(Fraction(c) ** 2 for c in c_list))


def vector_tail_bound(fam: BoundedVectorFamily, delta) -> HPReal:
    _, D = hoeffding_vector_threshold(fam)
    return _two_exp(delta, D.value)


# -- Monte Carlo ----------------------------------------------------------------


def replicate_words(seed: int, replicate: int, k: int) -> np.ndarray:
    """k raw 64-bit words of the (seed, replicate) stream."""
    return np.random.Philox(key=[seed, replicate]).random_raw(k)


def _deviations(fam_arrays, seed, start, stop):
    mid, half, law = fam_arrays
    n, m = mid.shape
    out = np.empty(stop - start)
    for r in range(start, stop):
        if law == "two-point":
            words = replicate_words(seed, r, n)
            s = np.where(words >> np.uint64(63), 1.0, -1.0)
            dev = (s[:, None] * half).sum(axis=0)
        else:
            words = replicate_words(seed, r, n * m).reshape(n, m)
            u = (words >> np.uint64(11)).astype(np.float64) * 2.0**-53
            dev = ((2 * u - 1) * half).sum(axis=0)
        out[r - start] = np.abs(dev).sum()
    return out


def _fam_arrays(fam):
    mid = np.array([[float((l + u) / 2) for l, u in zip(lr, ur)] for lr, ur in zip(fam.lower, fam.upper)])
    half = np.array([[float((u - l) / 2) for l, u in zip(lr, ur)] for lr, ur in zip(fam.lower, fam.upper)])
    return mid, half, fam.law


def _job(args):
    return _deviations(*args)


def mc_tail(fam: BoundedVectorFamily, delta_grid: Sequence, samples: int, seed: int,
            workers: int = 1) -> TailReport:
    """Empirical Pr[||Y - mu||_1 >= T + delta] per delta, against 2 exp(-2 delta^2 / D)."""
    if samples < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples")
    seed = int(seed) & (2**64 - 1)
    T, D = hoeffding_vector_threshold(fam)
    arrays = _fam_arrays(fam)
    if workers > 1:
        edges = np.linspace(0, samples, workers + 1).astype(int)
        jobs = [(arrays, seed, int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            dev = np.concatenate(list(pool.map(_job, jobs)))
    else:
        dev = _deviations(arrays, seed, 0, samples)
    grid = tuple(Fraction(d) for d in delta_grid)
    freqs, errs, theo = [], [], []
    for d in grid:
        p = float(np.count_nonzero(dev >= float(T) + float(d))) / samples
        freqs.append(p)
        errs.append(math.sqrt(p * (1 - p) / samples))
        theo.append(_two_exp(d, D.value))
    return TailReport(
        tuple(HPReal(d, EXACT) for d in grid), tuple(freqs), tuple(errs), tuple(theo),
        samples, seed, T, D, float(dev.mean()), float(dev.std(ddof=1) / math.sqrt(samples)),
    )


def sqrt_d_grid(fam: BoundedVectorFamily, multipliers: Sequence) -> list:
    """delta = t * sqrt(D) for each multiplier t, rounded down to 2^-40."""
    _, D = hoeffding_vector_threshold(fam)
    root = IV.sqrt(iv(D.value))
    return [HPReal.down(iv(Fraction(t)) * root).value.limit_denominator(2**40) for t in multipliers]


# -- constants ---------------------------------------------------------------------


def expectation_claim_check(b, alpha_grid: Sequence) -> HPReal:
    """min over the grid of (alpha + exp(-2 alpha^2) / alpha) * sqrt(b), rounded up."""
    b = b.value if isinstance(b, HPReal) else Fraction(b)
    if b <= 0:
        raise ValueError("b must be > 0")
    best = None
    for a in alpha_grid:
        a = Fraction(a)
        if a <= 0:
            raise ValueError("alpha must be > 0")
        x = iv(a)
        val = HPReal.up((x + IV.exp(-2 * x * x) / x) * IV.sqrt(iv(b)))
        best = val if best is None or val < best else best
    return best


def _f_main(a):
    return 2 * a / (1 - 2 * mpmath.exp(2 - 2 * a * a))


def _f_variant(a):
    return 2 * a / (1 - 2 * mpmath.exp(-2 * a * a))


def _mpf(x):
    x = Fraction(x)
    return mpmath.mpf(x.numerator) / x.denominator


def golden_section(f, lo, hi, tol=GOLDEN_TOL):
    """Minimiser of a unimodal f on [lo, hi]."""
    with mpmath.workprec(100):
        invphi = (mpmath.sqrt(5) - 1) / 2
        a, b = _mpf(lo), _mpf(hi)
        c, d = b - invphi * (b - a), a + invphi * (b - a)
        fc, fd = f(c), f(d)
        while b - a > tol:
            if fc < fd:
                b, d, fd = d, c, fc
                c = b - invphi * (b - a)
                fc = f(c)
            else:
                a, c, fc = c, d, fd
                d = a + invphi * (b - a)
                fd = f(d)
        return (a + b) / 2


@dataclass(frozen=True)
class ConstantReport:
    min_value: HPReal
    argmin: HPReal
    closed_form_argmin: float
    lambert_residual: float
    variant_min: HPReal
    variant_argmin: HPReal

    def __iter__(self):
        return iter((self.min_value, self.argmin))


def _minimise(f, f_iv, pole, alpha_range, tol):
    lo, hi = map(Fraction, alpha_range)
    if hi <= pole:
        raise ValueError(f"denominator is not positive anywhere on [{float(lo)}, {float(hi)}]")
    # f -> infinity at the pole, so start just to its right
    lo = max(lo, pole + Fraction(1, 10**6))
    a = golden_section(f, lo, hi, tol)
    p, q = mpmath.libmp.to_rational(a._mpf_)
    arg = Fraction(int(p), int(q)).limit_denominator(10**15)
    return HPReal.up(f_iv(iv(arg))), HPReal(arg, EXACT)


def thm4_constant(alpha_range=(1, 3), tol: float = GOLDEN_TOL) -> ConstantReport:
    """Minimum of 2a / (1 - 2 exp(2 - 2a^2)) over a in alpha_range, plus the
    minimum of the variant 2a / (1 - 2 exp(-2a^2)) and a Lambert-W check."""
    pole = Fraction(math.sqrt(1 + math.log(2) / 2)).limit_denominator(10**12) + Fraction(1, 10**10)
    main = _minimise(_f_main, lambda x: 2 * x / (1 - 2 * IV.exp(2 - 2 * x * x)), pole, alpha_range, tol)
    vpole = Fraction(math.sqrt(math.log(2) / 2)).limit_denominator(10**12) + Fraction(1, 10**10)
    var = _minimise(_f_variant, lambda x: 2 * x / (1 - 2 * IV.exp(-2 * x * x)), vpole,
                    (0, alpha_range[1]), tol)
    with mpmath.workprec(100):
        target = -1 / (4 * mpmath.exp(mpmath.mpf(5) / 2))
        closed = mpmath.sqrt(-2 * mpmath.lambertw(target, -1).real - 1) / 2
        a = _mpf(main[1].value)
        w = -2 * a * a - mpmath.mpf(1) / 2
        residual = abs(w * mpmath.exp(w) - target)
    return ConstantReport(main[0], main[1], float(closed), float(residual), var[0], var[1])
