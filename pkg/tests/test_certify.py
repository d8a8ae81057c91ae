import random

import pytest
from hypothesis import given, strategies as st

import reference as ref
from hullsupport.certify import (
    KernelWitness,
    NoWitness,
    _dfs_witness,
    _mitm_witness,
    hull_vertices,
    is_vertex_exact,
    kernel_certificate,
    on_open_segment,
)
from hullsupport.model import Instance, IntMatrix, residual


def knap(a, b):
    return Instance(IntMatrix.from_rows([list(a)]), (b,))


def test_kernel_certificate_examples():
    assert isinstance(kernel_certificate(knap((1, 2, 4), 7), (1, 1, 1)), NoWitness)
    res = kernel_certificate(knap((1, 1), 2), (1, 1))
    assert isinstance(res, KernelWitness) and tuple(res.x) in {(1, -1), (-1, 1)}
    zero = Instance(IntMatrix.from_rows([[3, -5]]), (0,))
    assert kernel_certificate(zero, (0, 0)) == NoWitness(0)


def test_kernel_certificate_rejects_bad_points():
    with pytest.raises(ValueError):
        kernel_certificate(knap((1, 2, 4), 7), (1, 1, 0))
    with pytest.raises(ValueError):
        kernel_certificate(knap((1, -1), 0), (-1, -1))
    big = knap([1] * 26, 26)
    with pytest.raises(ValueError, match="budget"):
        kernel_certificate(big, [1] * 26)


def _random_cols(rng, s, m, lo=-4, hi=4):
    return [tuple(rng.randint(lo, hi) for _ in range(m)) for _ in range(s)]


@pytest.mark.parametrize("seed", range(40))
def test_mitm_agrees_with_dfs(seed):
    rng = random.Random(seed)
    s, m = rng.randint(1, 12), rng.randint(1, 3)
    cols = _random_cols(rng, s, m, 1 if seed % 2 else -6, 9)
    a, b = _dfs_witness(cols, m), _mitm_witness(cols, m)
    assert (a is None) == (b is None)
    for x in (a, b):
        if x is not None:
            assert any(x) and all(sum(v * c[j] for v, c in zip(x, cols)) == 0 for j in range(m))


@given(st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), min_size=1, max_size=7))
def test_dfs_agrees_with_brute_force(cols):
    assert (_dfs_witness(cols, 2) is None) == (ref.brute_witness(cols) is None)


@given(st.lists(st.integers(1, 9), min_size=1, max_size=6), st.data())
def test_witness_soundness(a, data):
    x0 = data.draw(st.lists(st.integers(0, 3), min_size=len(a), max_size=len(a)))
    b = sum(u * v for u, v in zip(a, x0))
    inst = knap(a, b)
    res = kernel_certificate(inst, x0)
    if isinstance(res, KernelWitness):
        for sign in (1, -1):
            q = [v + sign * w for v, w in zip(x0, res.x)]
            assert min(q) >= 0 and not any(residual(inst.A, inst.b, q))
        assert res.x.support() <= frozenset(i for i, v in enumerate(x0) if v)


def test_is_vertex_exact_examples():
    assert not is_vertex_exact([(0, 0), (2, 0), (1, 0)], (1, 0))
    cloud = [(7, 0, 0), (5, 1, 0), (3, 2, 0), (1, 3, 0), (3, 0, 1), (1, 1, 1)]
    assert is_vertex_exact(cloud, (1, 1, 1))
    assert not is_vertex_exact(cloud, (5, 1, 0))
    assert is_vertex_exact([(4, 2)], (4, 2))


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)),
                min_size=2, max_size=6, unique=True))
def test_is_vertex_exact_matches_fourier_motzkin(pts):
    for w in pts:
        others = [p for p in pts if p != w]
        assert is_vertex_exact(pts, w) == (not ref.fm_in_hull(others, w))


def test_on_open_segment():
    assert on_open_segment([(0, 0), (2, 2), (1, 1), (3, 0)]) == {(1, 1)}
    assert on_open_segment([(0, 0), (1, 0)]) == set()


@given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(0, 2)),
                min_size=1, max_size=14, unique=True))
def test_hull_vertices_matches_plain_lp(pts):
    plain = {p for p in pts if is_vertex_exact(pts, p)}
    assert {tuple(v) for v in hull_vertices(pts)} == plain


def test_all_ones_passes_on_powers():
    for d in range(1, 8):
        a = [1 << i for i in range(d)]
        assert isinstance(kernel_certificate(knap(a, (1 << d) - 1), [1] * d), NoWitness)


def test_dfs_and_mitm_methods_selectable():
    inst = knap((1, 2, 3), 6)
    for method in ("dfs", "mitm"):
        assert isinstance(kernel_certificate(inst, (1, 1, 1), method=method), KernelWitness)
    with pytest.raises(ValueError):
        kernel_certificate(inst, (1, 1, 1), method="nope")
