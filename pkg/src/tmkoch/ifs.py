"""The (+1, d1, ..., dm) iterated function system and its deterministic iteration."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import NotContracting, VertexCapExceeded
from .geometry import (
    VERTEX_CAP,
    Polyline,
    divide,
    hausdorff_distance,
    int_power,
    partial_sum,
    polyline_Q,
    root_of_unity,
)
from .report import CheckReport
from .sequence import SignPattern

JUNCTION_TOL = 1e-12


@dataclass(frozen=True)
class Similarity:
    """The map z -> multiplier * z + offset."""

    multiplier: complex
    offset: complex

    def __call__(self, z):
        return self.multiplier * z + self.offset

    @property
    def ratio(self) -> float:
        return abs(self.multiplier)


@dataclass(frozen=True)
class IfsSystem:
    """The m+1 similarities together with their undivided ingredients.

    ``maps[j](z) == (anchors[j] + rotations[j] * z) / factor``.
    """

    pattern: SignPattern
    maps: tuple[Similarity, ...]
    ratio: float
    factor: complex
    anchors: tuple[complex, ...]
    rotations: tuple[complex, ...]


def build_ifs(pattern: SignPattern) -> IfsSystem:
    """S_j(z) = (p(j) + d_j * exp(2*pi*i*j/m) * z) / p(m+1) for j = 0..m."""
    m = pattern.m
    factor = partial_sum(pattern, m + 1)
    if abs(factor) <= 1:
        raise NotContracting(abs(factor))
    rotations = tuple(pattern.deltas[j] * root_of_unity(m, j) for j in range(m + 1))
    anchors = tuple(partial_sum(pattern, j) for j in range(m + 1))
    maps = tuple(
        Similarity(multiplier=divide(rot, factor), offset=divide(anchor, factor))
        for rot, anchor in zip(rotations, anchors)
    )
    return IfsSystem(pattern, maps, 1.0 / abs(factor), factor, anchors, rotations)


def apply_similarity(s: Similarity, z: complex) -> complex:
    return s.multiplier * z + s.offset


def union_images(system: IfsSystem, vertices: np.ndarray) -> np.ndarray:
    """Concatenate S_0(W), ..., S_m(W), merging each shared junction vertex.

    Raises:
        ValueError: if S_j of the last vertex and S_{j+1} of the first vertex
            differ by more than ``JUNCTION_TOL``.
    """
    images = [s(vertices) for s in system.maps]
    parts = [images[0]]
    for j in range(1, len(images)):
        gap = abs(images[j - 1][-1] - images[j][0])
        if gap > JUNCTION_TOL:
            raise ValueError(f"images {j - 1} and {j} do not chain (gap {gap:.3e})")
        parts.append(images[j][1:])
    return np.concatenate(parts)


def iterate_ifs(system: IfsSystem, level: int, cap: int = VERTEX_CAP) -> Polyline:
    """Apply W -> S_0(W) u ... u S_m(W) ``level`` times, starting at [0, 1].

    The iteration runs on U = factor**n * W, where the maps read
    U -> factor**n * anchor_j + rotation_j * U, and divides once at the end.
    This is the same composition of similarities; deferring the division
    keeps rounding from compounding level by level.
    """
    if level < 0:
        raise ValueError("level must be non-negative")
    if system.pattern.base**level + 1 > cap:
        raise VertexCapExceeded(f"level {level} exceeds vertex cap {cap}")
    u = np.array([0.0, 1.0], dtype=np.complex128)
    for n in range(level):
        scale = int_power(system.factor, n)
        images = [scale * anchor + rot * u
                  for anchor, rot in zip(system.anchors, system.rotations)]
        tol = JUNCTION_TOL * abs(system.factor) ** (n + 1)
        parts = [images[0]]
        for j in range(1, len(images)):
            gap = abs(images[j - 1][-1] - images[j][0])
            if gap > tol:
                raise ValueError(f"images {j - 1} and {j} do not chain (gap {gap:.3e})")
            parts.append(images[j][1:])
        u = np.concatenate(parts)
    return Polyline(divide(u, int_power(system.factor, level)))


def self_similarity_check(pattern: SignPattern, level: int, tol: float = 1e-9) -> CheckReport:
    """Compare Q(level+1) from partial sums with the union of S_j(Q(level))."""
    system = build_ifs(pattern)
    direct = polyline_Q(pattern, level + 1).vertices
    via_maps = union_images(system, polyline_Q(pattern, level).vertices)
    if direct.size != via_maps.size:
        return CheckReport("self-similar", False, {"vertex_count_mismatch": float(direct.size - via_maps.size)})
    deviation = float(np.abs(direct - via_maps).max())
    return CheckReport(
        "self-similar",
        deviation <= tol,
        {"max_deviation": deviation, "tol": tol, "level": float(level)},
    )


def convergence_diagnostics(pattern: SignPattern, max_level: int,
                            step: float = 1e-3) -> list[float]:
    """[d_H(Q_0, Q_1), ..., d_H(Q_{max_level-1}, Q_{max_level})].

    The limit curve itself is never available; distances between successive
    approximations should shrink roughly by the contraction ratio per level.
    """
    if max_level < 1:
        raise ValueError("max_level must be at least 1")
    curves = [polyline_Q(pattern, n) for n in range(max_level + 1)]
    return [hausdorff_distance(curves[n], curves[n + 1], step) for n in range(max_level)]


def limit_distance_report(pattern: SignPattern, max_level: int,
                          step: float = 1e-3) -> list[dict[str, float]]:
    """Per level n < max_level: successive distance, distance to the deepest
    level Q_N (N = max_level), and an upper bound on the distance to the limit.

    Q_{n+1} is the union of the S_j(Q_n), so successive distances shrink by
    exactly the ratio r and d_H(Q_n, K) <= d_H(Q_n, Q_{n+1}) / (1 - r). The
    bound inherits the sampling error of the distance estimate.
    """
    if max_level < 1:
        raise ValueError("max_level must be at least 1")
    r = build_ifs(pattern).ratio
    curves = [polyline_Q(pattern, n) for n in range(max_level + 1)]
    deepest = curves[-1]
    rows = []
    for n in range(max_level):
        succ = hausdorff_distance(curves[n], curves[n + 1], step)
        rows.append({
            "level": float(n),
            "successive": succ,
            "to_deepest": hausdorff_distance(curves[n], deepest, step),
            "limit_bound": succ / (1 - r),
        })
    return rows
