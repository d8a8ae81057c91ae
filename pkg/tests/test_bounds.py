import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

import reference as ref
from hullsupport import bounds as B
from hullsupport.instances import FamilySpec, gen
from hullsupport.linalg import rank
from hullsupport.model import Instance, IntMatrix

A124 = IntMatrix.from_rows([[1, 2, 4]])
I2 = IntMatrix.from_rows([[1, 0], [0, 1]])
LEM13 = IntMatrix.from_rows([[1, 2, 0, 0], [0, 0, 1, 2]])
TRI3 = IntMatrix.from_rows([[1, 0, 0], [1, 1, 0], [1, 1, 1]])


def close(h, x, tol=1e-9):
    return abs(float(h) - x) < tol


# -- knapsack ------------------------------------------------------------------


def test_knapsack_pigeonhole():
    assert close(B.knapsack_pigeonhole((1, 2, 4)), math.log2(7) + 1)
    assert B.knapsack_pigeonhole((1,)) == 1
    assert close(B.knapsack_pigeonhole((-3, 3)), math.log2(6) + 1)
    with pytest.raises(ValueError):
        B.knapsack_pigeonhole((0, 0))


def test_knapsack_l2_bound():
    h = B.knapsack_l2_bound((1, 2, 4))
    assert close(h, 4.007629741919216) and h >= 3
    assert close(B.knapsack_l2_bound((1,), [0]), math.log2(3.51))
    with pytest.raises(ValueError):
        B.knapsack_l2_bound((0, 1), [0])


@pytest.mark.parametrize("d", range(1, 11))
def test_knapsack_l2_bound_on_powers_matches_lower_bound_discussion(d):
    # ||a||_2^2 = (4^d - 1)/3, so the bound equals d - (1/2)log2(3 / (1 - 4^-d)) + log2(3.51),
    # which is at most d - (1/2)log2(3 - eps) + log2(3.51) for every eps > 0
    a = [1 << i for i in range(d)]
    expected = d - 0.5 * math.log2(3 / (1 - 4.0**-d)) + math.log2(3.51)
    h = B.knapsack_l2_bound(a)
    assert close(h, expected)
    assert float(h) <= d - 0.5 * math.log2(3) + math.log2(3.51)


def test_knapsack_delta_bound():
    assert close(B.knapsack_delta_bound(4), 4.894551608750691)
    assert close(B.knapsack_delta_bound(1), 1.8945516087506906)
    h = B.knapsack_delta_bound(2)
    assert close(h, 3.3945516087506906) and h < 2 * math.log2(4)
    with pytest.raises(ValueError):
        B.knapsack_delta_bound(0)


def test_knapsack_implicit_bound():
    root4, closed4 = B.knapsack_implicit_bound(4)
    assert close(root4, 4.967770258328079)  # frozen, independent bisection
    assert close(root4, ref.lem5_root(4))
    root1, _ = B.knapsack_implicit_bound(1)
    assert close(root1, 2.4611320694785364)
    _, closed2 = B.knapsack_implicit_bound(2)
    assert close(closed2, math.log2(4 * math.sqrt(3)))
    assert close(closed4, math.log2(8 * math.sqrt(1.5 * 3)))


@pytest.mark.parametrize("Delta", [1, 2, 3, 7, 64, 1000])
def test_implicit_roots_have_tiny_residual(Delta):
    root, _ = B.knapsack_implicit_bound(Delta)
    with mpmath.workprec(300):
        s = mpmath.mpf(root.value.numerator) / root.value.denominator
        g = s - mpmath.log(mpmath.mpf(351) / 100 * mpmath.sqrt(s) * Delta, 2)
        assert abs(g) < mpmath.mpf(2) ** -64
        assert g >= 0  # upper end of the bracket


# -- general m -------------------------------------------------------------------


def test_general_gamma():
    assert close(B.general_gamma(A124), 2.12 * math.sqrt(21))
    assert close(B.general_gamma(I2), 1.12 * 2 + math.sqrt(2))
    assert close(B.general_gamma(LEM13), 8.17106992976791)
    assert close(B.general_gamma(LEM13), ref.gamma(LEM13.rows))


def test_general_supp_bound():
    assert close(B.general_supp_bound(A124), 5.864263128048651)
    h = B.general_supp_bound(LEM13)
    assert close(h, 9.57818916999855) and h >= 4
    assert close(B.general_supp_bound(IntMatrix.from_rows([[1]]), [0]), math.log2(2 * math.e * 2.12 + 2 * math.e))


def test_general_delta_bound_variants():
    assert close(B.general_delta_bound(1, 1, "corollary-24"), 2 * math.log2(24))
    assert close(B.general_delta_bound(2, 4, "warmup", 1), 25.3947496022592)
    assert close(B.general_delta_bound(1, 1, "implicit-root"), 4.9589538730769815)
    assert close(B.general_delta_bound(3, 5, "implicit-root"), ref.lem11_root(3, 5), 1e-8)
    with pytest.raises(ValueError):
        B.general_delta_bound(2, 4, "warmup", 0)
    with pytest.raises(ValueError):
        B.general_delta_bound(2, 4, "nonsense")


def test_pigeonhole_general_and_related():
    assert close(B.pigeonhole_general(1, 3, 4), math.log2(13))
    assert B.simple_related(I2) == 2
    assert close(B.simple_related(TRI3), math.log2(24))
    assert close(B.simple_related_n(A124, [0, 1, 2]), math.log2(13))


# -- structure -------------------------------------------------------------------


def test_structure_distance_examples():
    assert B.structure_distance((1, 1, 0), [(1, 0, 0)]) == 1
    assert B.structure_distance((2, 0), [(1, 0)]) == 0
    assert B.structure_distance((1, 1, 1), [(1, 0, 0), (1, 1, 0)]) == 1
    assert B.structure_distance((3, -4), []) == 7


@given(st.lists(st.integers(-4, 4), min_size=3, max_size=3),
       st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=0, max_size=2))
def test_structure_distance_properties(a, basis):
    d = B.structure_distance_exact(a, basis)
    assert 0 <= d <= sum(abs(v) for v in a)
    in_span = rank(basis + [a]) == rank(basis) if basis else not any(a)
    assert (d == 0) == in_span


def test_structure_distance_matches_scipy():
    opt = pytest.importorskip("scipy.optimize")
    rng = random.Random(11)
    for _ in range(30):
        n, k = rng.randint(2, 5), rng.randint(1, 3)
        a = [rng.randint(-5, 5) for _ in range(n)]
        basis = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(k)]
        # variables lambda (free) and t >= |a - sum lambda b|
        c = [0] * k + [1] * n
        A_ub, b_ub = [], []
        for j in range(n):
            row = [basis[i][j] for i in range(k)]
            e = [0] * n
            e[j] = -1
            A_ub.append([-v for v in row] + e)
            b_ub.append(-a[j])
            A_ub.append(row + e)
            b_ub.append(a[j])
        res = opt.linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=[(None, None)] * k + [(0, None)] * n, method="highs")
        assert abs(float(B.structure_distance_exact(a, basis)) - res.fun) < 1e-7


def test_structure_bound_examples():
    assert B.structure_bound(TRI3) == 3
    assert B.structure_bound(A124) == 3
    assert B.structure_bound(I2) == 2
    with pytest.raises(ValueError):
        B.structure_bound(IntMatrix.from_rows([[1] * 2] * 10))


def test_structure_dp_equals_permutation_minimum():
    import itertools

    rng = random.Random(5)
    for _ in range(10):
        m, n = rng.randint(2, 4), rng.randint(3, 5)
        A = IntMatrix.from_rows([[rng.randint(-3, 3) for _ in range(n)] for _ in range(m)])
        brute = min(
            math.prod(
                math.ceil(B.structure_distance_exact(A.rows[p[i]], [A.rows[q] for q in p[:i]])) + 1 for i in range(m)
            )
            for p in itertools.permutations(range(m))
        )
        assert B.structure_product(A) == brute


def test_minkowski_bound():
    assert close(B.minkowski_bound(A124), 1 + 0.5 * math.log2(21))
    assert B.minkowski_bound(I2) == 4
    assert close(B.minkowski_bound(LEM13), 4 + 0.5 * math.log2(25))
    with pytest.raises(ValueError):
        B.minkowski_bound(IntMatrix.from_rows([[1, 2], [2, 4]]))


# -- counts --------------------------------------------------------------------------


def test_vertex_count_bounds():
    assert B.knapsack_count(3, 4) == 5 * 85766121
    assert B.knapsack_count(1, 1) == 250
    rep = B.vertex_count_bounds(3, 1, 4)
    assert rep.get("Count.knapsack").value == 5 * 85766121
    rep2 = B.vertex_count_bounds(4, 2, 2)
    assert not rep2.get("Count.knapsack").applicable
    L = math.ceil(4 * math.log2(24 * math.sqrt(2) * 2))
    levels = math.ceil(2 * math.log2(2 * 9))
    assert rep2.get("Count.general").value == 4**2 * L * 4**L * levels**L


# -- inequality analysis ------------------------------------------------------------


def test_minimal_Y_examples():
    y = B.minimal_Y(1, 8)
    assert y >= 4 and y.value - 4 < Fraction(1, 2**60)
    assert close(B.minimal_Y(2, 4), 6.756215304028009)
    assert B.minimal_Y(1, 2) == 1  # root is exactly m here
    for m in range(2, 9):
        assert B.minimal_Y(m, 2) > m
    for m in range(1, 9):
        assert B.minimal_Y_integer(m, 2) > m
    with pytest.raises(ValueError):
        B.minimal_Y(1, Fraction(3, 2))


@pytest.mark.parametrize("m", range(1, 9))
@pytest.mark.parametrize("x", [2, 3, 4, 9, 64, 1000])
def test_minimal_Y_matches_reference(m, x):
    assert close(B.minimal_Y(m, x), ref.minimal_y(m, x), 1e-8)


def test_minimal_Y_integer():
    assert B.minimal_Y_integer(1, 8) == 5
    for m in range(1, 6):
        for x in (4, 10, 33):
            y = B.minimal_Y_integer(m, x)
            f = lambda t: t - m / 2 * math.log2(t) - m * math.log2(x)
            assert f(y) > 0 and (y - 1 < 1 or f(y - 1) <= 1e-12)


def test_ineq_table_examples():
    c1 = B.ineq_table_bound(1, 1, 8)
    assert c1.case_id == 1 and close(c1.bound, 4.084962500721156) and c1.bound >= 4
    assert B.ineq_table_bound(2, 1, 9).case_id == 3
    c4 = B.ineq_table_bound(8, 1, 4)
    assert c4.case_id == 4 and close(c4.bound, 43.12748974056956)
    assert B.thm20_case(2, 10) == 1


def test_ineq_uniform_examples():
    assert close(B.ineq_uniform_bound(1, 2, 4), 6.350279968160875)
    assert close(B.ineq_uniform_bound(4, 2, 2), 25.4011198726435)


def test_sqrt_log_crossover():
    assert B.sqrt_log_crossover(4) == 0
    assert B.sqrt_log_crossover(16) == 0
    assert B.sqrt_log_crossover(9) == -1
    assert B.sqrt_log_crossover(64) == 1
    assert all(B.sqrt_log_crossover(x) == -1 for x in range(5, 16))


# -- properties ---------------------------------------------------------------------


def test_delta_bounds_monotone():
    for m in range(1, 9):
        prev = None
        for Delta in range(1, 65):
            vals = (
                B.general_delta_bound(m, Delta, "corollary-24"),
                B.general_delta_bound(m, Delta, "warmup", 1),
                B.ineq_uniform_bound(m, 2, Delta),
            )
            if m == 1:
                vals += (B.knapsack_delta_bound(Delta), B.knapsack_implicit_bound(Delta)[0])
            if prev is not None:
                assert all(a >= b for a, b in zip(vals, prev))
            prev = vals
    for Delta in (1, 4, 17, 64):
        seq = [B.general_delta_bound(m, Delta, "corollary-24") for m in range(1, 9)]
        assert seq == sorted(seq)
        seq = [B.general_delta_bound(m, Delta, "implicit-root") for m in range(1, 9)]
        assert seq == sorted(seq)


def test_upper_bounds_dominate_high_precision_truth():
    with mpmath.workprec(300):
        for a in ([1, 2, 4], [3, 5, 7, 11], [8]):
            h = B.knapsack_l2_bound(a)
            truth = mpmath.log(mpmath.mpf(351) / 100 * mpmath.sqrt(sum(v * v for v in a)), 2)
            assert mpmath.mpf(h.value.numerator) / h.value.denominator >= truth


def test_full_report_tags_and_applicability():
    rep = B.full_report(Instance(A124, (7,)))
    assert rep.get("Thm4").applicable and rep.get("Lem19").applicable
    rep2 = B.full_report(gen(FamilySpec("block-diagonal", m=2, d=2)))
    assert not rep2.get("Thm4").applicable and "m = 1" in rep2.get("Thm4").condition_note
    rep3 = B.full_report(Instance(IntMatrix.from_rows([[1, 1], [2, 2]]), (1, 2)))
    assert not rep3.get("Lem19").applicable
    with pytest.raises(ValueError):
        B.BoundEntry("NotATag", None)
