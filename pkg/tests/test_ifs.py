import math

import numpy as np
import pytest

from tmkoch.analysis import corollary_pattern
from tmkoch.exceptions import NotContracting
from tmkoch.geometry import partial_sum, polyline_Q
from tmkoch.ifs import (
    apply_similarity,
    build_ifs,
    convergence_diagnostics,
    iterate_ifs,
    limit_distance_report,
    self_similarity_check,
    union_images,
)
from tmkoch.sequence import make_pattern

CLASSICAL = make_pattern(3, [-1, -1, 1])


def test_build_ifs_classical():
    system = build_ifs(CLASSICAL)
    assert len(system.maps) == 4
    assert system.ratio == pytest.approx(1 / 3)
    for s in system.maps:
        assert s.ratio == pytest.approx(1 / 3, abs=1e-15)
    assert apply_similarity(system.maps[0], 0) == 0
    assert apply_similarity(system.maps[3], 1) == pytest.approx(1)


@pytest.mark.parametrize("m", range(2, 13))
def test_maps_chain_endpoints(m):
    system = build_ifs(corollary_pattern(m))
    maps = system.maps
    assert abs(maps[0](0)) < 1e-12
    assert abs(maps[-1](1) - 1) < 1e-12
    for a, b in zip(maps, maps[1:]):
        assert abs(a(1) - b(0)) < 1e-12


@pytest.mark.parametrize("m", range(2, 13))
def test_maps_are_contractions(m):
    system = build_ifs(corollary_pattern(m))
    rng = np.random.default_rng(m)
    z = rng.normal(size=(20, 2)) @ [1, 1j]
    w = rng.normal(size=(20, 2)) @ [1, 1j]
    for s in system.maps:
        ratio = np.abs(s(z) - s(w)) / np.abs(z - w)
        np.testing.assert_allclose(ratio, 1 / abs(partial_sum(system.pattern, m + 1)), rtol=1e-12)
        assert ratio.max() < 1


def test_build_ifs_refuses_non_contracting():
    with pytest.raises(NotContracting, match=r"\|p\(m\+1\)\|"):
        build_ifs(make_pattern(1, [-1]))


def test_union_images_reproduces_next_level():
    system = build_ifs(CLASSICAL)
    q1 = polyline_Q(CLASSICAL, 1).vertices
    q2 = polyline_Q(CLASSICAL, 2).vertices
    assert np.abs(union_images(system, q1) - q2).max() < 1e-12


@pytest.mark.parametrize("m", [2, 3, 4, 5, 7])
@pytest.mark.parametrize("level", [0, 1, 2, 3])
def test_iterate_matches_scaled_polyline(m, level):
    pattern = corollary_pattern(m)
    a = iterate_ifs(build_ifs(pattern), level).vertices
    b = polyline_Q(pattern, level).vertices
    assert np.abs(a - b).max() < 1e-12


@pytest.mark.parametrize("m", [2, 4])
def test_iterate_bit_identical_on_exact_lattices(m):
    pattern = corollary_pattern(m)
    a = iterate_ifs(build_ifs(pattern), 3).vertices
    np.testing.assert_array_equal(a, polyline_Q(pattern, 3).vertices)


def test_iterate_ifs_level_zero():
    np.testing.assert_array_equal(iterate_ifs(build_ifs(CLASSICAL), 0).vertices, [0, 1])


def test_self_similarity_report():
    report = self_similarity_check(CLASSICAL, 3)
    assert report.passed
    assert report.metrics["max_deviation"] < 1e-12


def test_self_similarity_fails_with_absurd_tolerance():
    # a negative tolerance can never be met; the check must report failure
    report = self_similarity_check(corollary_pattern(5), 2, tol=-1.0)
    assert not report.passed


def test_convergence_geometric():
    dists = convergence_diagnostics(CLASSICAL, 4, step=1e-3)
    assert dists[0] == pytest.approx(math.sqrt(3) / 6, abs=2e-3)
    for prev, cur in zip(dists, dists[1:]):
        assert cur / prev == pytest.approx(1 / 3, abs=0.02)


def test_limit_distance_report():
    rows = limit_distance_report(CLASSICAL, 3, step=1e-3)
    assert [r["level"] for r in rows] == [0, 1, 2]
    assert rows[-1]["to_deepest"] == pytest.approx(rows[-1]["successive"])
    for r in rows:
        # the deepest level is itself within the bound of the limit
        assert r["to_deepest"] <= r["limit_bound"] + 2e-3
        assert r["limit_bound"] == pytest.approx(1.5 * r["successive"])
