"""Corollary machinery: sign patterns with a real expansion factor, their
open sets, the open set condition, and the similarity dimension."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import NotContracting, PatternError
from .geometry import partial_sum
from .ifs import build_ifs
from .report import CheckReport
from .sequence import SignPattern


@dataclass(frozen=True, eq=False)
class OpenSetPolygon:
    """Open convex polygon given by its vertices in counterclockwise order."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=np.complex128)
        if v.ndim != 1 or v.size not in (3, 4):
            raise ValueError("an open set polygon has 3 or 4 vertices")
        object.__setattr__(self, "vertices", v)
        if signed_area(v) <= 0:
            raise ValueError("polygon must be counterclockwise with positive area")
        if not is_convex(v):
            raise ValueError("polygon must be convex")

    @property
    def area(self) -> float:
        return signed_area(self.vertices)


def signed_area(v: np.ndarray) -> float:
    x, y = v.real, v.imag
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _cross(o: complex, a: complex, b: complex) -> float:
    return (a.real - o.real) * (b.imag - o.imag) - (a.imag - o.imag) * (b.real - o.real)


def is_convex(v: np.ndarray) -> bool:
    n = v.size
    return all(_cross(v[i], v[(i + 1) % n], v[(i + 2) % n]) > 0 for i in range(n))


def clip_convex(subject: np.ndarray, clipper: np.ndarray, snap: float = 1e-12) -> np.ndarray:
    """Sutherland-Hodgman intersection of two counterclockwise convex polygons.

    Signed distances within ``snap`` (relative to the clip edge length) are
    treated as zero, so polygons that only share an edge clip to a
    degenerate result instead of a rounding-error sliver.
    """
    out = list(subject)
    n = clipper.size
    for i in range(n):
        if not out:
            break
        a, b = clipper[i], clipper[(i + 1) % n]
        edge = abs(b - a)
        pts = out
        out = []
        dist = []
        for p in pts:
            d = _cross(a, b, p) / edge
            dist.append(0.0 if abs(d) <= snap * max(edge, 1.0) else d)
        for k, p in enumerate(pts):
            q = pts[(k + 1) % len(pts)]
            dp, dq = dist[k], dist[(k + 1) % len(pts)]
            if dp >= 0:
                out.append(p)
            if (dp > 0 and dq < 0) or (dp < 0 and dq > 0):
                t = dp / (dp - dq)
                out.append(p + t * (q - p))
    return np.array(out, dtype=np.complex128)


def overlap_area(a: np.ndarray, b: np.ndarray) -> float:
    """Area of the intersection of two convex counterclockwise polygons."""
    inter = clip_convex(a, b)
    if inter.size < 3:
        return 0.0
    return max(signed_area(inter), 0.0)


def corollary_pattern(m: int) -> SignPattern:
    """+1 on 0..q, -1 on q+1..m-q-1, +1 on m-q..m, with q = m // 4."""
    if not isinstance(m, (int, np.integer)) or m < 2:
        raise PatternError(f"corollary patterns need m >= 2, got {m!r}")
    q = m // 4
    deltas = tuple(1 if k <= q or k >= m - q else -1 for k in range(m + 1))
    return SignPattern(int(m), deltas)


def is_corollary_pattern(pattern: SignPattern) -> bool:
    return pattern.m >= 2 and corollary_pattern(pattern.m) == pattern


def realness_check(pattern: SignPattern, tol: float = 1e-9) -> CheckReport:
    """p(m+1) real and inside [3, m+1] (proved only for corollary patterns)."""
    m = pattern.m
    value = partial_sum(pattern, m + 1)
    passed = abs(value.imag) <= tol and 3 - tol <= value.real <= m + 1 + tol
    notes = "" if is_corollary_pattern(pattern) else "outside proved regime"
    return CheckReport(
        "realness",
        passed,
        {"re": value.real, "im": value.imag, "lower": 3.0, "upper": float(m + 1)},
        notes,
    )


def imaginary_part_lemmas(m: int, tol: float = 1e-9) -> CheckReport:
    """Sign of Im p at the half index, by residue of m mod 4.

    m = 0 mod 4: Im p(m/2) = 1;  m = 1: Im p((m+1)/2) >= 0;
    m = 2: Im p(m/2) = 0;        m = 3: Im p((m+1)/2) < 0.
    """
    if m < 4:
        raise ValueError("the half-index lemmas are stated for m >= 4")
    pattern = corollary_pattern(m)
    residue = m % 4
    index = m // 2 if m % 2 == 0 else (m + 1) // 2
    im = partial_sum(pattern, index).imag
    if residue == 0:
        passed, claim = abs(im - 1) <= tol, "= 1"
    elif residue == 1:
        passed, claim = im >= -tol, ">= 0"
    elif residue == 2:
        passed, claim = abs(im) <= tol, "= 0"
    else:
        passed, claim = im < 0, "< 0"
    return CheckReport(
        "im-lemmas",
        bool(passed),
        {"im": im, "index": float(index), "residue": float(residue)},
        f"Im p({index}) {claim}",
    )


def _triangle_sums(m: int) -> tuple[float, float]:
    q = m // 4
    k = np.arange(q + 1)
    return float(np.cos(2 * np.pi * k / m).sum()), float(np.sin(2 * np.pi * k / m).sum())


def open_set(m: int) -> OpenSetPolygon:
    """Open set for the corollary pattern of the given ``m``."""
    if m < 2:
        raise ValueError("open sets are defined for m >= 2")
    if m == 2:
        return OpenSetPolygon(np.array([0, 1, 1 + 1j, 1j]))
    if m == 3:
        return OpenSetPolygon(np.array([0, 0.5 - 0.5j / math.sqrt(3), 1]))
    a_m, b_m = _triangle_sums(m)
    top = 0.5 + 0.5j * b_m / a_m
    if m % 4 != 3:
        return OpenSetPolygon(np.array([0, 1, top]))
    pattern = corollary_pattern(m)
    factor = partial_sum(pattern, m + 1)
    # factor is real for corollary patterns
    c_m = -partial_sum(pattern, (m + 1) // 2).imag / factor.real
    return OpenSetPolygon(np.array([0, 0.5 - 1j * c_m, 1, top]))


def osc_check(pattern: SignPattern, v: OpenSetPolygon, tol: float = 1e-9) -> CheckReport:
    """Check S_j(V) inside V and pairwise disjoint interiors of the S_j(V).

    Containment is tested on vertices (everything is convex); disjointness by
    clipping, with overlap area at most ``tol**2`` counted as empty.
    """
    system = build_ifs(pattern)
    base = v.vertices
    images = []
    for s in system.maps:
        img = s(base)
        if signed_area(img) < 0:
            img = img[::-1]
        images.append(img)
    n = base.size
    margin = math.inf
    for img in images:
        for p in img:
            for i in range(n):
                a, b = base[i], base[(i + 1) % n]
                margin = min(margin, _cross(a, b, p) / abs(b - a))
    worst_overlap = 0.0
    for i in range(len(images)):
        for j in range(i + 1, len(images)):
            worst_overlap = max(worst_overlap, overlap_area(images[i], images[j]))
    passed = margin >= -tol and worst_overlap <= tol * tol
    notes = "" if is_corollary_pattern(pattern) else "outside proved regime"
    return CheckReport(
        "osc",
        passed,
        {"containment_margin": float(margin), "max_overlap_area": float(worst_overlap), "tol": tol},
        notes,
    )


def similarity_dimension(pattern: SignPattern) -> float:
    """log(m+1) / log|p(m+1)|, the root of (m+1) * r**s = 1 for r = 1/|p(m+1)|."""
    modulus = abs(partial_sum(pattern, pattern.m + 1))
    if modulus <= 1:
        raise NotContracting(modulus)
    return math.log(pattern.m + 1) / math.log(modulus)
