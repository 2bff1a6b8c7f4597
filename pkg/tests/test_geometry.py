import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.spatial import cKDTree

from tmkoch.analysis import corollary_pattern
from tmkoch.exceptions import NotContracting, VertexCapExceeded
from tmkoch.geometry import (
    Polyline,
    densify,
    epsilon_area_ratio,
    hausdorff_distance,
    int_power,
    partial_sum,
    partial_sums,
    polyline_P,
    polyline_Q,
    root_of_unity,
)
from tmkoch.sequence import make_pattern

CLASSICAL = make_pattern(3, [-1, -1, 1])
H = math.sqrt(3) / 2


def brute_hausdorff(a, b, step):
    """Point-cloud oracle: dense samples on both sides, nearest-neighbour via a k-d tree."""
    pa = densify(np.asarray(a), step)
    pb = densify(np.asarray(b), step)
    xa = np.column_stack([pa.real, pa.imag])
    xb = np.column_stack([pb.real, pb.imag])
    d1 = cKDTree(xb).query(xa)[0].max()
    d2 = cKDTree(xa).query(xb)[0].max()
    return max(d1, d2)


@pytest.mark.parametrize(
    "m, k, expected",
    [(4, 1, 1j), (3, 1, complex(-0.5, H)), (7, 0, 1), (5, 5, 1), (4, -1, -1j)],
)
def test_root_of_unity(m, k, expected):
    assert abs(root_of_unity(m, k) - expected) < 1e-15


def test_partial_sum_examples():
    assert partial_sum(CLASSICAL, 0) == 0
    assert partial_sum(CLASSICAL, 4) == pytest.approx(3)
    assert partial_sum(corollary_pattern(4), 5) == 3
    assert partial_sum(make_pattern(1, [-1]), 2) == 0


def test_partial_sums_match_scalar_path():
    for pattern in (CLASSICAL, corollary_pattern(7), make_pattern(5, [1, -1, 1, 1, -1])):
        arr = partial_sums(pattern, 2000)
        scalar = np.array([partial_sum(pattern, n) for n in range(2001)])
        assert np.abs(arr - scalar).max() < 1e-11


def test_polyline_P_examples():
    np.testing.assert_allclose(polyline_P(CLASSICAL, 0).vertices, [0, 1])
    np.testing.assert_allclose(
        polyline_P(CLASSICAL, 1).vertices, [0, 1, 1.5 - H * 1j, 2, 3], atol=1e-12
    )
    np.testing.assert_array_equal(
        polyline_P(corollary_pattern(4), 1).vertices, [0, 1, 1 + 1j, 2 + 1j, 2, 3]
    )


def test_polyline_P_vertex_count():
    assert len(polyline_P(corollary_pattern(5), 3)) == 6**3 + 1


def test_polyline_cap():
    with pytest.raises(VertexCapExceeded):
        polyline_P(CLASSICAL, 13)
    with pytest.raises(VertexCapExceeded):
        polyline_Q(CLASSICAL, 3, cap=64)


def test_polyline_Q_examples():
    np.testing.assert_allclose(
        polyline_Q(CLASSICAL, 1).vertices, [0, 1 / 3, 0.5 - H / 3 * 1j, 2 / 3, 1], atol=1e-12
    )
    np.testing.assert_array_equal(polyline_Q(corollary_pattern(6), 0).vertices, [0, 1])
    q2 = polyline_Q(corollary_pattern(2), 2).vertices
    assert q2.size == 10
    np.testing.assert_allclose(q2, np.arange(10) / 9, atol=1e-12)


def test_polyline_Q_not_contracting():
    with pytest.raises(NotContracting):
        polyline_Q(make_pattern(1, [-1]), 1)
    with pytest.raises(NotContracting):
        polyline_Q(make_pattern(3, [1, 1, 1]), 1)


@pytest.mark.parametrize("m", [2, 3, 5, 8, 11])
@pytest.mark.parametrize("level", [0, 1, 2, 3])
def test_polyline_Q_endpoints(m, level):
    v = polyline_Q(corollary_pattern(m), level).vertices
    assert abs(v[0]) < 1e-9 and abs(v[-1] - 1) < 1e-9


signs_st = st.integers(1, 9).flatmap(
    lambda m: st.lists(st.sampled_from([1, -1]), min_size=m, max_size=m).map(
        lambda s: make_pattern(m, s)
    )
)


@settings(max_examples=40, deadline=None)
@given(signs_st)
def test_unit_steps(pattern):
    steps = np.diff(partial_sums(pattern, 500))
    np.testing.assert_allclose(np.abs(steps), 1.0, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(signs_st, st.integers(1, 4))
def test_block_scaling_identity(pattern, n):
    factor = partial_sum(pattern, pattern.m + 1)
    for j in range(1, pattern.m + 1):
        lhs = partial_sum(pattern, j * pattern.base**n)
        rhs = int_power(factor, n) * partial_sum(pattern, j)
        assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs))


def test_hausdorff_identical_and_translate():
    q = polyline_Q(CLASSICAL, 2)
    assert hausdorff_distance(q, q, 1e-3) < 1e-15
    d = hausdorff_distance(Polyline([0, 1]), Polyline([1j, 1 + 1j]), 1e-3)
    assert d == pytest.approx(1, abs=1e-3)


def test_hausdorff_koch_first_step():
    q0, q1 = polyline_Q(CLASSICAL, 0), polyline_Q(CLASSICAL, 1)
    oracle = brute_hausdorff(q0.vertices, q1.vertices, 1e-5)
    assert oracle == pytest.approx(math.sqrt(3) / 6, abs=1e-5)
    assert hausdorff_distance(q0, q1, 1e-3) == pytest.approx(oracle, abs=1e-3)


def test_hausdorff_rejects_nonfinite():
    with pytest.raises(ValueError):
        hausdorff_distance(np.array([0, np.nan]), Polyline([0, 1]), 1e-2)
    with pytest.raises(ValueError):
        hausdorff_distance(Polyline([0, 1]), Polyline([0, 1]), 0)


def test_hausdorff_symmetry_and_triangle():
    rng = np.random.default_rng(7)
    step = 1e-2
    for _ in range(20):
        a, b, c = (rng.normal(size=6) + 1j * rng.normal(size=6) for _ in range(3))
        dab = hausdorff_distance(a, b, step)
        assert dab == hausdorff_distance(b, a, step)
        assert dab <= hausdorff_distance(a, c, step) + hausdorff_distance(c, b, step) + 2 * step


def test_hausdorff_against_point_cloud_oracle():
    rng = np.random.default_rng(3)
    for _ in range(5):
        a = rng.normal(size=5) + 1j * rng.normal(size=5)
        b = rng.normal(size=7) + 1j * rng.normal(size=7)
        assert hausdorff_distance(a, b, 1e-3) == pytest.approx(brute_hausdorff(a, b, 1e-4), abs=1e-3)


def test_epsilon_area_stadium():
    expected = 0.2 + math.pi * 0.01
    assert epsilon_area_ratio(CLASSICAL, 0, 0.1, 512) == pytest.approx(expected, rel=0.02)


def test_epsilon_area_positive():
    assert epsilon_area_ratio(CLASSICAL, 3, 0.5, 1024) > 0


def test_epsilon_area_bounded_across_levels():
    ratios = [epsilon_area_ratio(CLASSICAL, n, 0.5, 1024) for n in range(1, 6)]
    assert max(ratios) / min(ratios) <= 4


def test_epsilon_area_rejects():
    with pytest.raises(ValueError):
        epsilon_area_ratio(CLASSICAL, 1, 0.0, 512)
    with pytest.raises(ValueError):
        epsilon_area_ratio(CLASSICAL, 1, 0.1, 32)
