"""Complex-plane primitives for the generalized Koch construction.

Points are Python/numpy complex numbers. ``P(n)`` is the path through the
partial sums ``p(0), ..., p((m+1)**n)`` and ``Q(n) = P(n) / p(m+1)**n``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np

from .exceptions import NotContracting, VertexCapExceeded
from .sequence import SignPattern, delta_array

VERTEX_CAP = 2**24 + 1


@dataclass(frozen=True, eq=False)
class Polyline:
    """Ordered vertices of a polygonal line (complex128, at least two)."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.ascontiguousarray(self.vertices, dtype=np.complex128)
        if v.ndim != 1 or v.size < 2:
            raise ValueError("a polyline needs a 1-d array of at least 2 vertices")
        if not np.all(np.isfinite(v)):
            raise ValueError("polyline vertices must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    def __len__(self) -> int:
        return self.vertices.size

    @property
    def segments(self) -> int:
        return self.vertices.size - 1


@lru_cache(maxsize=None)
def root_of_unity(m: int, k: int) -> complex:
    """exp(2*pi*i*k/m), correctly rounded; k is reduced mod m first."""
    if m < 1:
        raise ValueError("m must be positive")
    k %= m
    with mpmath.workdps(30):
        x = mpmath.mpf(2 * k) / m
        return complex(float(mpmath.cospi(x)), float(mpmath.sinpi(x)))


@lru_cache(maxsize=None)
def _root_table(m: int) -> np.ndarray:
    table = np.array([root_of_unity(m, k) for k in range(m)], dtype=np.complex128)
    table.setflags(write=False)
    return table


def root_table(m: int) -> np.ndarray:
    return _root_table(m)


def partial_sum(pattern: SignPattern, n: int) -> complex:
    """p(n) = sum_{k<n} delta_k * exp(2*pi*i*k/m)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return 0j
    m = pattern.m
    signs = delta_array(pattern, n).astype(np.float64)
    roots = root_table(m)[np.arange(n) % m]
    return complex(math.fsum((signs * roots.real).tolist()), math.fsum((signs * roots.imag).tolist()))


def partial_sums(pattern: SignPattern, count: int) -> np.ndarray:
    """Array of p(0), ..., p(count) (``count + 1`` values).

    Signs are laid out in rows of ``m`` so that every column shares one root
    of unity; the running totals per column are exact integers, which keeps
    the rounding error independent of ``count``.
    """
    m = pattern.m
    roots = root_table(m)
    rows = -(-count // m) if count else 0
    grid = np.zeros(rows * m, dtype=np.int64)
    grid[:count] = delta_array(pattern, count)
    grid = grid.reshape(rows, m)
    before = np.zeros((rows + 1, m), dtype=np.int64)
    np.cumsum(grid, axis=0, out=before[1:])
    row_start = before.astype(np.float64) @ roots
    inside = np.zeros((rows, m), dtype=np.complex128)
    np.cumsum(grid[:, :-1] * roots[:-1], axis=1, out=inside[:, 1:])
    out = np.empty(rows * m + 1, dtype=np.complex128)
    out[:-1] = (row_start[:-1, None] + inside).ravel()
    out[-1] = row_start[-1]
    return out[: count + 1]


def scale_factor(pattern: SignPattern) -> complex:
    """p(m+1), the expansion factor of the construction."""
    return partial_sum(pattern, pattern.m + 1)


def int_power(z: complex, n: int) -> complex:
    """z**n by repeated squaring over an exact integer exponent."""
    result = 1 + 0j
    base = z
    while n:
        if n & 1:
            result *= base
        base *= base
        n >>= 1
    return result


def divide(values, divisor: complex):
    """values / divisor, correctly rounded when the divisor is real."""
    if divisor.imag == 0:
        return values / divisor.real
    return values / divisor


def _check_cap(pattern: SignPattern, level: int, cap: int) -> int:
    if level < 0:
        raise ValueError("level must be non-negative")
    count = pattern.base**level
    if count + 1 > cap:
        raise VertexCapExceeded(
            f"level {level} needs {count + 1} vertices, cap is {cap}"
        )
    return count


def polyline_P(pattern: SignPattern, level: int, cap: int = VERTEX_CAP) -> Polyline:
    """Unscaled polygonal line through p(0), ..., p((m+1)**level)."""
    count = _check_cap(pattern, level, cap)
    return Polyline(partial_sums(pattern, count))


def polyline_Q(pattern: SignPattern, level: int, cap: int = VERTEX_CAP) -> Polyline:
    """P(level) divided by p(m+1)**level; runs from 0 to 1."""
    factor = scale_factor(pattern)
    if abs(factor) <= 1:
        raise NotContracting(abs(factor))
    count = _check_cap(pattern, level, cap)
    return Polyline(divide(partial_sums(pattern, count), int_power(factor, level)))


def densify(vertices: np.ndarray, step: float) -> np.ndarray:
    """Sample every segment with spacing at most ``step`` (endpoints included)."""
    a = vertices[:-1]
    b = vertices[1:]
    lengths = np.abs(b - a)
    counts = np.maximum(np.ceil(lengths / step).astype(np.int64), 1)
    seg = np.repeat(np.arange(a.size), counts)
    starts = np.cumsum(counts) - counts
    local = np.arange(seg.size) - np.repeat(starts, counts)
    t = local / counts[seg]
    pts = a[seg] + t * (b[seg] - a[seg])
    return np.concatenate([pts, vertices[-1:]])


def _point_segment_min(points: np.ndarray, a: np.ndarray, b: np.ndarray,
                       chunk: int = 1 << 22) -> np.ndarray:
    """Distance from each point to the nearest of the segments [a_k, b_k]."""
    d = b - a
    dd = (d.real**2 + d.imag**2)
    safe = np.where(dd > 0, dd, 1.0)
    out = np.empty(points.size)
    rows = max(1, chunk // max(a.size, 1))
    for lo in range(0, points.size, rows):
        p = points[lo:lo + rows, None]
        w = p - a[None, :]
        t = (w.real * d.real + w.imag * d.imag) / safe
        t = np.clip(np.where(dd > 0, t, 0.0), 0.0, 1.0)
        out[lo:lo + rows] = np.abs(w - t * d).min(axis=1)
    return out


def _as_vertices(x) -> np.ndarray:
    v = x.vertices if isinstance(x, Polyline) else np.asarray(x, dtype=np.complex128)
    if not np.all(np.isfinite(v)):
        raise ValueError("non-finite vertex")
    return v


def directed_distance(a, b, step: float) -> float:
    """sup over sampled points of ``a`` of the exact distance to polyline ``b``."""
    va, vb = _as_vertices(a), _as_vertices(b)
    pts = densify(va, step) if va.size > 1 else va
    if vb.size == 1:
        return float(np.abs(pts - vb[0]).max())
    return float(_point_segment_min(pts, vb[:-1], vb[1:]).max())


def hausdorff_distance(a, b, step: float) -> float:
    """Hausdorff distance between two polylines, within ``step`` of the exact value.

    Both inputs are densified at spacing ``step``; each sample is measured
    against the other polyline's segments exactly, so the only error comes
    from the sampling of the sup and is bounded by ``step / 2``.
    """
    if not step > 0:
        raise ValueError("step must be positive")
    return max(directed_distance(a, b, step), directed_distance(b, a, step))


def epsilon_area(vertices: np.ndarray, epsilon: float, resolution: int) -> float:
    """Rasterized area of the open epsilon-neighborhood of a polyline.

    Pixel centres of a ``resolution x resolution`` grid over the bounding box
    (grown by ``epsilon``) are counted when strictly within ``epsilon`` of a
    segment.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    if resolution < 64:
        raise ValueError("resolution must be at least 64")
    x0 = vertices.real.min() - epsilon
    x1 = vertices.real.max() + epsilon
    y0 = vertices.imag.min() - epsilon
    y1 = vertices.imag.max() + epsilon
    dx = (x1 - x0) / resolution
    dy = (y1 - y0) / resolution
    xs = x0 + (np.arange(resolution) + 0.5) * dx
    ys = y0 + (np.arange(resolution) + 0.5) * dy
    mask = np.zeros((resolution, resolution), dtype=bool)
    eps2 = epsilon * epsilon
    a = vertices[:-1]
    b = vertices[1:]
    lo_x = np.minimum(a.real, b.real) - epsilon
    hi_x = np.maximum(a.real, b.real) + epsilon
    lo_y = np.minimum(a.imag, b.imag) - epsilon
    hi_y = np.maximum(a.imag, b.imag) + epsilon
    i0 = np.clip(np.floor((lo_x - x0) / dx - 0.5).astype(np.int64), 0, resolution)
    i1 = np.clip(np.ceil((hi_x - x0) / dx - 0.5).astype(np.int64) + 1, 0, resolution)
    j0 = np.clip(np.floor((lo_y - y0) / dy - 0.5).astype(np.int64), 0, resolution)
    j1 = np.clip(np.ceil((hi_y - y0) / dy - 0.5).astype(np.int64) + 1, 0, resolution)
    for k in range(a.size):
        px = xs[i0[k]:i1[k]][None, :]
        py = ys[j0[k]:j1[k]][:, None]
        ax, ay = a[k].real, a[k].imag
        ux, uy = b[k].real - ax, b[k].imag - ay
        uu = ux * ux + uy * uy
        wx = px - ax
        wy = py - ay
        if uu > 0:
            t = np.clip((wx * ux + wy * uy) / uu, 0.0, 1.0)
        else:
            t = 0.0
        ex = wx - t * ux
        ey = wy - t * uy
        mask[j0[k]:j1[k], i0[k]:i1[k]] |= ex * ex + ey * ey < eps2
    return float(np.count_nonzero(mask)) * dx * dy


def epsilon_area_ratio(pattern: SignPattern, level: int, epsilon: float,
                       resolution: int = 1024) -> float:
    """Area of the epsilon-neighborhood of P(level) divided by (m+1)**level.

    A heuristic look at whether the ratio stays bounded away from zero as
    the level grows; it proves nothing about the limit.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    curve = polyline_P(pattern, level)
    return epsilon_area(curve.vertices, epsilon, resolution) / pattern.base**level
