"""Exact scalars, dense integer matrices and the instance data model.

Integers are plain Python ``int`` (arbitrary precision) and rationals are
``fractions.Fraction``; both are exact.  Irrational quantities (logarithms,
square roots) are evaluated with 128-bit interval arithmetic and stored as
:class:`HPReal`, an exact dyadic rational that is a rigorous upper or lower
bound of the true value.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import mpmath

BigInt = int
BigRat = Fraction

PRECISION = 128

ROUND_UP = "rounded-up"
ROUND_DOWN = "rounded-down"
EXACT = "exact"


def interval_context(prec: int = PRECISION) -> mpmath.MPIntervalContext:
    ctx = mpmath.MPIntervalContext()
    ctx.prec = prec
    return ctx


IV = interval_context()


def iv(x) -> mpmath.ctx_iv.ivmpf:
    """Enclose an int, Fraction or HPReal in a 128-bit interval."""
    if isinstance(x, HPReal):
        x = x.value
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return IV.mpf(x.numerator)
        return IV.mpf(x.numerator) / IV.mpf(x.denominator)
    return IV.mpf(x)


def iv_log2(x):
    return IV.log(x) / IV.log(2)


def _endpoint(raw) -> Fraction:
    p, q = mpmath.libmp.to_rational(raw)
    return Fraction(int(p), int(q))


@functools.total_ordering
@dataclass(frozen=True)
class HPReal:
    """A real number known only through a directed 128-bit rounding.

    ``value`` is the exact dyadic endpoint; ``rounding`` says whether it
    sits above (``rounded-up``) or below (``rounded-down``) the true value,
    or equals it (``exact``).
    """

    value: Fraction
    rounding: str = ROUND_UP
    prec: int = PRECISION

    @classmethod
    def up(cls, x) -> "HPReal":
        """Upper endpoint of an interval (or exact wrap of a rational)."""
        if isinstance(x, (int, Fraction)):
            return cls(Fraction(x), EXACT)
        return cls(_endpoint(x._mpi_[1]), ROUND_UP)

    @classmethod
    def down(cls, x) -> "HPReal":
        if isinstance(x, (int, Fraction)):
            return cls(Fraction(x), EXACT)
        return cls(_endpoint(x._mpi_[0]), ROUND_DOWN)

    def __float__(self) -> float:
        return float(self.value)

    def _other(self, other):
        if isinstance(other, HPReal):
            return other.value
        if isinstance(other, float):
            return Fraction(other)
        return other

    def __eq__(self, other):
        if isinstance(other, (HPReal, int, Fraction, float)):
            return self.value == self._other(other)
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, (HPReal, int, Fraction, float)):
            return self.value < self._other(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        return f"HPReal({float(self.value)!r}, {self.rounding})"

    def decimal(self, digits: int = 30) -> str:
        """Decimal string rounded in this value's own direction."""
        return decimal_string(self.value, digits, up=self.rounding != ROUND_DOWN)


def decimal_string(x: Fraction, digits: int = 30, up: bool = True) -> str:
    """Render ``x`` with ``digits`` fractional digits, rounding up or down."""
    scale = 10**digits
    n = x * scale
    q = math.ceil(n) if up else math.floor(n)
    if x.denominator == 1:
        return str(x.numerator)
    sign = "-" if q < 0 else ""
    q = abs(q)
    whole, frac = divmod(q, scale)
    text = f"{sign}{whole}.{frac:0{digits}d}".rstrip("0")
    return text[:-1] if text.endswith(".") else text


class IntPoint(tuple):
    """An integer vector; hashable and comparable like a tuple."""

    def __new__(cls, coords: Iterable[int] = ()):
        return super().__new__(cls, (int(c) for c in coords))

    def support(self) -> frozenset:
        return frozenset(i for i, c in enumerate(self) if c != 0)

    def is_nonnegative(self) -> bool:
        return all(c >= 0 for c in self)

    def __repr__(self):
        return f"IntPoint({tuple(self)!r})"


def support(p: Sequence) -> frozenset:
    """Indices of the nonzero coordinates of ``p``."""
    return frozenset(i for i, c in enumerate(p) if c != 0)


@dataclass(frozen=True)
class IntMatrix:
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in r) for r in self.rows)
        if not rows or not rows[0]:
            raise ValueError("matrix must have at least one row and one column")
        if any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged matrix rows")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_rows(cls, rows) -> "IntMatrix":
        return cls(tuple(rows))

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows[0])

    def row(self, j: int) -> tuple:
        return self.rows[j]

    def col(self, i: int) -> tuple:
        return tuple(r[i] for r in self.rows)

    def columns(self) -> list:
        return [self.col(i) for i in range(self.n)]

    def restrict(self, cols: Iterable[int]) -> "IntMatrix":
        """The submatrix A[S] of the given columns, in increasing order."""
        cols = sorted(cols)
        if not cols:
            raise ValueError("empty column set")
        return IntMatrix(tuple(tuple(r[i] for i in cols) for r in self.rows))

    def inf_norm(self) -> int:
        return max(abs(v) for r in self.rows for v in r)

    def row_l1(self, j: int) -> int:
        return sum(abs(v) for v in self.rows[j])

    def row_l2_sq(self, j: int) -> int:
        return sum(v * v for v in self.rows[j])

    def col_l1(self, i: int) -> int:
        return sum(abs(r[i]) for r in self.rows)

    def matvec(self, x: Sequence) -> tuple:
        if len(x) != self.n:
            raise ValueError(f"vector length {len(x)} != {self.n} columns")
        return tuple(sum(a * v for a, v in zip(r, x)) for r in self.rows)

    def gram(self) -> list:
        """The exact integer matrix A A^T."""
        return [[sum(a * b for a, b in zip(r, s)) for s in self.rows] for r in self.rows]


@dataclass(frozen=True)
class Instance:
    """Integer program ``min c.x, Ax = b, x >= 0 integral``."""

    A: IntMatrix
    b: tuple
    c: Optional[tuple] = None
    name: str = "instance"
    var_upper_bounds: Optional[tuple] = None

    def __post_init__(self):
        A = self.A if isinstance(self.A, IntMatrix) else IntMatrix.from_rows(self.A)
        object.__setattr__(self, "A", A)
        b = tuple(int(v) for v in self.b)
        if len(b) != A.m:
            raise ValueError(f"b has length {len(b)}, expected {A.m}")
        object.__setattr__(self, "b", b)
        if self.c is not None:
            c = tuple(int(v) for v in self.c)
            if len(c) != A.n:
                raise ValueError(f"c has length {len(c)}, expected {A.n}")
            object.__setattr__(self, "c", c)
        if self.var_upper_bounds is not None:
            u = tuple(int(v) for v in self.var_upper_bounds)
            if len(u) != A.n:
                raise ValueError(f"var_upper_bounds has length {len(u)}, expected {A.n}")
            if any(v < 0 for v in u):
                raise ValueError("var_upper_bounds must be nonnegative")
            object.__setattr__(self, "var_upper_bounds", u)

    @property
    def m(self) -> int:
        return self.A.m

    @property
    def n(self) -> int:
        return self.A.n

    @property
    def delta(self) -> int:
        return self.A.inf_norm()

    def is_feasible_point(self, x: Sequence) -> bool:
        return all(v >= 0 for v in x) and not any(residual(self.A, self.b, x))


def residual(A: IntMatrix, b: Sequence, x: Sequence) -> tuple:
    """Exact ``Ax - b``."""
    if len(b) != A.m:
        raise ValueError(f"b has length {len(b)}, expected {A.m}")
    return tuple(v - w for v, w in zip(A.matvec(x), b))
