"""Instance families: power-of-two knapsacks, their block-diagonal stacking,
the lower-triangular structure example, and seeded random instances."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .model import Instance, IntMatrix, IntPoint
from .oracle import (BudgetExceeded, OracleError, enumerate_lattice, exposed_by,
                     hull_vertices_oracle)

FAMILIES = ("knapsack-powers", "block-diagonal", "triangular", "random")


@dataclass(frozen=True)
class FamilySpec:
    family: str
    d: int = 1
    m: int = 1
    n: int = 1
    Delta: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        for name in ("d", "m", "n", "Delta"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.family == "random" and self.m > self.n:
            raise ValueError("random family needs m <= n")

    @classmethod
    def parse(cls, text: str) -> "FamilySpec":
        """``knapsack-powers(3)``, ``block-diagonal(2,2)``, ``triangular(3)``, ``random(5,1,8,42)``."""
        text = text.strip()
        if "(" not in text or not text.endswith(")"):
            raise ValueError(f"cannot parse family spec {text!r}")
        name, args = text[:-1].split("(", 1)
        vals = [int(v) for v in args.split(",") if v.strip()]
        arity = {"knapsack-powers": ("d",), "block-diagonal": ("m", "d"), "triangular": ("m",),
                 "random": ("n", "m", "Delta", "seed")}
        if name not in arity:
            raise ValueError(f"unknown family {name!r}")
        if len(vals) != len(arity[name]):
            raise ValueError(f"{name} takes {len(arity[name])} parameters, got {len(vals)}")
        return cls(name, **dict(zip(arity[name], vals)))

    def label(self) -> str:
        return {
            "knapsack-powers": f"knapsack-powers({self.d})",
            "block-diagonal": f"block-diagonal({self.m},{self.d})",
            "triangular": f"triangular({self.m})",
            "random": f"random({self.n},{self.m},{self.Delta},{self.seed})",
        }[self.family]


def _powers(d):
    return [1 << i for i in range(d)]


def gen(spec: FamilySpec) -> Instance:
    if spec.family == "knapsack-powers":
        a = _powers(spec.d)
        return Instance(IntMatrix.from_rows([a]), ((1 << spec.d) - 1,), tuple(a), spec.label())
    if spec.family == "block-diagonal":
        m, d = spec.m, spec.d
        rows = []
        for j in range(m):
            row = [0] * (m * d)
            row[j * d:(j + 1) * d] = _powers(d)
            rows.append(row)
        return Instance(IntMatrix.from_rows(rows), ((1 << d) - 1,) * m, tuple(_powers(d) * m), spec.label())
    if spec.family == "triangular":
        m = spec.m
        rows = [[1 if i <= j else 0 for i in range(m)] for j in range(m)]
        return Instance(IntMatrix.from_rows(rows), tuple(j + 1 for j in range(m)), None, spec.label())
    rng = random.Random(spec.seed)
    rows = [[rng.randint(1, spec.Delta) for _ in range(spec.n)] for _ in range(spec.m)]
    x0 = [rng.randint(0, 3) for _ in range(spec.n)]
    b = tuple(sum(a * x for a, x in zip(r, x0)) for r in rows)
    return Instance(IntMatrix.from_rows(rows), b, None, spec.label())


def verify_family_vertex(spec: FamilySpec, max_points: int = 1000):
    """Check that all-ones is a hull vertex; return it and its support size.

    The full oracle decides it when the lattice cloud fits in ``max_points``.
    Larger clouds (knapsack-powers(7) already has 25510 points) use
    the exposed-point test instead: all-ones is the unique lattice point of
    least coordinate sum, since binary expansion is the unique shortest sum of
    powers of two.
    """
    inst = gen(spec)
    ones = IntPoint([1] * inst.n)
    if not inst.is_feasible_point(ones):
        raise OracleError("all-ones point is not feasible")
    try:
        cloud = enumerate_lattice(inst, max_points)
    except BudgetExceeded:
        cloud = None
    if cloud is not None:
        if ones not in hull_vertices_oracle(cloud):
            raise OracleError("all-ones point is not a vertex")
    elif not exposed_by(inst, ones, [1] * inst.n):
        raise OracleError("all-ones point is not exposed by the coordinate sum")
    return ones, len(ones.support())
