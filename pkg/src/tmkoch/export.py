"""SVG, CSV and JSON output."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .analysis import OpenSetPolygon
from .geometry import Polyline
from .report import CheckReport
from .sequence import SignPattern


@dataclass(frozen=True)
class RenderStyle:
    stroke_width: float = 1.0
    width: int = 800
    height: int = 600
    margin: float = 0.05
    include_open_sets: bool = True
    dashed_previous: bool = True

    def __post_init__(self):
        if self.width < 64 or self.height < 64:
            raise ValueError("canvas must be at least 64x64")
        if not 0 <= self.margin < 0.4:
            raise ValueError("margin fraction must lie in [0, 0.4)")
        if not self.stroke_width > 0:
            raise ValueError("stroke width must be positive")


def fmt(x: float) -> str:
    """Shortest string that round-trips to the same double; no negative zero."""
    x = float(x) + 0.0
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x}")
    s = repr(x)
    return s[:-2] if s.endswith(".0") else s


def _coord(x: float) -> str:
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


def render_svg(curves: Sequence[Polyline], polygons: Sequence[OpenSetPolygon] = (),
               style: RenderStyle = RenderStyle()) -> str:
    """SVG 1.1 document with one path per curve and one polygon per open set.

    Plane coordinates are fitted to the canvas with a uniform scale and the
    y axis flipped. When ``dashed_previous`` is set, every curve except the
    last is drawn dashed.
    """
    curves = list(curves)
    polygons = list(polygons) if style.include_open_sets else []
    if not curves and not polygons:
        raise ValueError("nothing to render")
    pts = [c.vertices for c in curves] + [p.vertices for p in polygons]
    allv = np.concatenate(pts)
    x0, x1 = allv.real.min(), allv.real.max()
    y0, y1 = allv.imag.min(), allv.imag.max()
    inner_w = style.width * (1 - 2 * style.margin)
    inner_h = style.height * (1 - 2 * style.margin)
    span_x = x1 - x0
    span_y = y1 - y0
    scale = min(inner_w / span_x if span_x > 0 else math.inf,
                inner_h / span_y if span_y > 0 else math.inf)
    if not math.isfinite(scale):
        scale = 1.0
    off_x = (style.width - scale * span_x) / 2
    off_y = (style.height - scale * span_y) / 2

    def to_canvas(v: np.ndarray) -> list[str]:
        xs = off_x + (v.real - x0) * scale
        ys = style.height - (off_y + (v.imag - y0) * scale)
        return [f"{_coord(x)},{_coord(y)}" for x, y in zip(xs, ys)]

    lines = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{style.width}" height="{style.height}" '
        f'viewBox="0 0 {style.width} {style.height}">',
        f'<rect x="0" y="0" width="{style.width}" height="{style.height}" fill="white"/>',
    ]
    for poly in polygons:
        lines.append(
            f'<polygon points="{" ".join(to_canvas(poly.vertices))}" fill="none" '
            f'stroke="#4477aa" stroke-width="{fmt(style.stroke_width / 2)}"/>'
        )
    for i, curve in enumerate(curves):
        coords = to_canvas(curve.vertices)
        d = "M " + coords[0] + "".join(" L " + c for c in coords[1:])
        dash = ' stroke-dasharray="4,3"' if style.dashed_previous and i < len(curves) - 1 else ""
        lines.append(
            f'<path d="{d}" fill="none" stroke="black" '
            f'stroke-width="{fmt(style.stroke_width)}"{dash}/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def export_csv(curve: Polyline) -> str:
    rows = ["re,im"]
    rows.extend(f"{fmt(z.real)},{fmt(z.imag)}" for z in curve.vertices)
    return "\n".join(rows) + "\n"


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """Deterministic JSON: sorted keys, floats in shortest round-trip form."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{_json_str(str(k))}: {dumps(v, indent, _level + 1)}"
                 for k, v in sorted(obj.items())]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(x, (int, float, np.integer, np.floating)) and not isinstance(x, bool)
               for x in obj):
            return "[" + ", ".join(dumps(x) for x in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj)
    if isinstance(obj, str):
        return _json_str(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _json_str(s: str) -> str:
    return json.dumps(s, ensure_ascii=False)


@dataclass
class RunReport:
    """What a CLI invocation computed. Timing is opt-in so reports stay reproducible."""

    command: list[str]
    pattern: Optional[SignPattern] = None
    results: dict = field(default_factory=dict)
    checks: list[CheckReport] = field(default_factory=list)
    timing_ms: Optional[float] = None

    def to_dict(self) -> dict:
        out: dict = {"command": list(self.command), "results": self.results,
                     "checks": [c.to_dict() for c in self.checks]}
        if self.pattern is not None:
            out["pattern"] = {"m": self.pattern.m, "deltas": list(self.pattern.deltas)}
        if self.timing_ms is not None:
            out["timing_ms"] = self.timing_ms
        return out

    def to_json(self) -> str:
        return dumps(self.to_dict()) + "\n"
