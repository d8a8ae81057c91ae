import itertools
import random
from fractions import Fraction

import pytest

from hullsupport.certify import NoWitness, kernel_certificate
from hullsupport.enumeration import (
    BoxDescriptor,
    BudgetRefused,
    box_grid,
    box_integer_search,
    count_limit,
    enumerate_bfs,
    enumerate_vertices,
    grid_depth,
    probe_box,
    proximity_radius,
    support_limit,
)
from hullsupport.instances import FamilySpec, gen
from hullsupport.model import Instance, IntMatrix
from hullsupport.oracle import enumerate_lattice, hull_vertices_oracle


def knap(a, b):
    return Instance(IntMatrix.from_rows([list(a)]), (b,))


A124 = knap((1, 2, 4), 7)
I2 = Instance(IntMatrix.from_rows([[1, 0], [0, 1]]), (1, 1))


def pts(s):
    return {tuple(p) for p in s}


def test_enumerate_bfs_examples():
    F = Fraction
    assert set(enumerate_bfs(A124)) == {(7, 0, 0), (0, F(7, 2), 0), (0, 0, F(7, 4))}
    assert enumerate_bfs(I2) == [(1, 1)]
    assert enumerate_bfs(knap((1, -1), 1)) == [(1, 0)]
    assert enumerate_bfs(knap((2,), -1)) == []


def test_proximity_radius():
    assert proximity_radius(knap((4, 1), 4)) == 9
    assert proximity_radius(knap((1,), 1)) == 3
    inst = Instance(IntMatrix.from_rows([[2, 1, 0], [0, 1, 1]]), (2, 2))
    assert proximity_radius(inst) == 162


def test_box_grid_example():
    boxes = list(box_grid([3], 3, 2))
    assert grid_depth(3) == 5
    assert sorted(b.k for b in boxes) == [(0,), (1,), (2,), (3,)]
    assert all(b.L == (0,) for b in boxes)
    assert [boxes[i].cell(0) for i in range(4)] == [(0, 0), (1, 1), (2, 3), (4, 7)]


def test_box_grid_ell_zero():
    boxes = list(box_grid([Fraction(5, 2), 1], 4, 0))
    assert [b.k for b in boxes] == [(0, 0)]
    assert boxes[0].L == (0, 0)


@pytest.mark.parametrize("seed", range(10))
def test_box_grid_count_and_disjointness(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    y = [Fraction(rng.randint(0, 20), rng.randint(1, 3)) for _ in range(n)]
    R, ell = rng.randint(1, 9), rng.randint(0, 3)
    boxes = list(box_grid(y, R, ell))
    assert len(boxes) <= count_limit(n, grid_depth(R), ell)
    assert len({b.k for b in boxes}) == len(boxes)
    # every integer point of the clipped ball lies in at most one cell
    for b in boxes:
        assert len(b.free()) <= ell
    owners = {}
    for b in boxes:
        ranges = [range(b.cell(i)[0], b.cell(i)[1] + 1) for i in range(n)]
        for x in itertools.product(*ranges):
            assert x not in owners, "two cells share an integer point"
            owners[x] = b.k


@pytest.mark.parametrize("seed", range(10))
def test_pruned_grid_is_subset(seed):
    rng = random.Random(100 + seed)
    a = [rng.randint(1, 6) for _ in range(rng.randint(2, 4))]
    inst = knap(a, rng.randint(1, 20))
    R, ell = proximity_radius(inst), support_limit(1, inst.delta)
    for y in enumerate_bfs(inst):
        pure = set(box_grid(y, R, ell))
        pruned = set(box_grid(y, R, ell, inst))
        assert pruned <= pure
        # pruned cells hold no lattice point of P
        for box in pure - pruned:
            assert box_integer_search(inst, box) is None


def test_box_integer_search_examples():
    box = BoxDescriptor((0, 1, 1), (1, 0, 0), 5)
    assert box.cell(1) == (1, 1) and box.cell(2) == (1, 1)
    assert tuple(box_integer_search(A124, box)) == (1, 1, 1)
    empty = BoxDescriptor((0, 0, 0), (1, 1, 0), 5)
    assert box_integer_search(A124, empty) is None
    fixed = BoxDescriptor((0, 0, 0), (7, 0, 0), 5)
    for direction in ("below", "above"):
        for i in range(3):
            assert box_integer_search(A124, fixed, "find-second", (7, 0, 0), i, direction) is None
    assert probe_box(A124, fixed) == ((7, 0, 0), 1)


def test_probe_box_detects_two_points():
    # both cells are [2, 3], so x1 + x2 = 5 has (2, 3) and (3, 2) inside
    inst = knap((1, 1), 5)
    box = BoxDescriptor((2, 2), (0, 0), 4)
    point, kind = probe_box(inst, box)
    assert point is None and kind == 2


def test_enumerate_vertices_examples():
    res = enumerate_vertices(A124)
    assert pts(res.vertices) == {(7, 0, 0), (1, 3, 0), (3, 0, 1), (1, 1, 1)}
    assert res.bfs_used == 3 and res.status == "ok"
    assert pts(enumerate_vertices(I2).vertices) == {(1, 1)}
    res = enumerate_vertices(knap((2,), 1))
    assert res.vertices == frozenset() and res.status == "infeasible"


@pytest.mark.parametrize("seed", range(12))
def test_discarded_boxes_hold_no_vertex(seed):
    rng = random.Random(500 + seed)
    a = [rng.randint(1, 8) for _ in range(rng.randint(2, 4))]
    inst = knap(a, rng.randint(1, 40))
    res = enumerate_vertices(inst, keep_discarded=True)
    oracle = pts(hull_vertices_oracle(enumerate_lattice(inst)))
    assert pts(res.vertices) == oracle
    for box in res.discarded_multi:
        assert not any(box.contains(v) for v in oracle)
    for v in res.vertices:
        assert isinstance(kernel_certificate(inst, v), NoWitness)


def test_two_row_instances_match_oracle():
    for spec in (FamilySpec("block-diagonal", m=2, d=2), FamilySpec("triangular", m=2)):
        inst = gen(spec)
        assert enumerate_vertices(inst).vertices == hull_vertices_oracle(enumerate_lattice(inst))


def test_parallel_matches_serial():
    inst = gen(FamilySpec("knapsack-powers", d=4))
    assert enumerate_vertices(inst, workers=2).vertices == enumerate_vertices(inst).vertices


def test_budget_refusals():
    with pytest.raises(BudgetRefused):
        enumerate_vertices(knap([1] * 13, 3))
    with pytest.raises(BudgetRefused):
        enumerate_vertices(knap((65, 1), 3))
    with pytest.raises(BudgetRefused):
        enumerate_vertices(gen(FamilySpec("knapsack-powers", d=5)), max_boxes=3)


def test_unbounded_warning():
    inst = Instance(IntMatrix.from_rows([[1, -1, 0], [0, 1, -1]]), (1, 1))
    with pytest.warns(UserWarning, match="unbounded"):
        res = enumerate_vertices(inst)
    assert res.warnings
