"""Command-line interface.

Exit status: 0 on success, 1 when a check fails, 2 on bad arguments or
inputs outside a command's hypotheses.
"""
from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path
from typing import Optional, Sequence, TextIO

import numpy as np

from . import analysis, geometry, ifs, morphism
from .exceptions import NotContracting, PatternError, VertexCapExceeded
from .export import RenderStyle, RunReport, dumps, export_csv, fmt, render_svg
from .report import CheckReport
from .sequence import SignPattern, make_pattern, sequence_prefix

CHECKS = ("self-similar", "conjugacy", "osc", "realness", "im-lemmas", "primitivity")


class UsageError(Exception):
    pass


def parse_signs(text: str) -> list[int]:
    out = []
    for token in text.split(","):
        token = token.strip()
        if token in ("+1", "1", "+"):
            out.append(1)
        elif token in ("-1", "-"):
            out.append(-1)
        else:
            raise UsageError(f"bad sign {token!r}; use +1 or -1")
    return out


def format_signs(pattern: SignPattern) -> str:
    return ",".join("+1" if d > 0 else "-1" for d in pattern.deltas[1:])


def _pattern_args(p: argparse.ArgumentParser, signs: bool = True) -> None:
    p.add_argument("--m", type=int, required=True)
    if signs:
        p.add_argument("--signs", help="comma-separated d1..dm, e.g. -1,-1,+1")
        p.add_argument("--corollary", action="store_true",
                       help="use the corollary sign pattern for --m instead of --signs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tmkoch", description="Generalized Koch curves from Thue-Morse sign sequences.")
    parser.add_argument("--timing", action="store_true",
                        help="include wall-clock timing in JSON reports")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sequence", help="first N sequence terms")
    _pattern_args(p)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("points", help="partial sums p(0..N) as CSV")
    _pattern_args(p)
    p.add_argument("--count", type=int, required=True)

    p = sub.add_parser("curve", help="polygonal line P(n), or Q(n) with --scaled")
    _pattern_args(p)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--scaled", action="store_true")
    p.add_argument("--out", default="-", help="FILE.svg, FILE.csv, or - for CSV on stdout")
    p.add_argument("--previous", action="store_true",
                   help="SVG: also draw the previous level dashed")
    p.add_argument("--open-sets", action="store_true",
                   help="SVG with --scaled: draw V and its images S_j(V)")

    p = sub.add_parser("attractor", help="polyline from iterating the IFS on [0, 1]")
    _pattern_args(p)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--out", default="-")

    p = sub.add_parser("check", help="run a verification; exit 0 iff it passes")
    p.add_argument("kind", choices=CHECKS)
    _pattern_args(p)
    p.add_argument("--level", type=int, default=3)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--json", action="store_true")
    p.add_argument("--words", type=int, default=100, help="conjugacy: random words to test")
    p.add_argument("--word-length", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bound", type=int, default=None, help="primitivity: largest n tried")

    p = sub.add_parser("dimension", help="similarity dimension log(m+1)/log|p(m+1)|")
    _pattern_args(p)

    p = sub.add_parser("converge", help="Hausdorff distances between Q(n), to the deepest level, and a bound to the limit")
    _pattern_args(p)
    p.add_argument("--max-level", type=int, required=True)
    p.add_argument("--step", type=float, default=1e-3)

    p = sub.add_parser("corollary", help="print the corollary pattern as CLI arguments")
    p.add_argument("--m", type=int, required=True)

    p = sub.add_parser("area-ratio", help="epsilon-neighborhood area of P(n) over (m+1)^n")
    _pattern_args(p)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--resolution", type=int, default=1024)
    return parser


def _normalize_argv(argv: Sequence[str]) -> list[str]:
    # "--signs -1,+1" would be read as an option; glue the value on
    out: list[str] = []
    it = iter(argv)
    for token in it:
        if token == "--signs":
            value = next(it, None)
            out.append("--signs" if value is None else f"--signs={value}")
        else:
            out.append(token)
    return out


def resolve_pattern(args) -> SignPattern:
    if getattr(args, "corollary", False):
        if args.signs:
            raise UsageError("give either --signs or --corollary, not both")
        return analysis.corollary_pattern(args.m)
    if args.signs is None:
        raise UsageError("--signs is required (or pass --corollary)")
    return make_pattern(args.m, parse_signs(args.signs))


def _require_contracting(pattern: SignPattern) -> None:
    modulus = abs(geometry.scale_factor(pattern))
    if modulus <= 1:
        raise NotContracting(modulus)


def _write(out: str, text: str, stdout: TextIO) -> None:
    if out == "-":
        stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _curve_output(args, curve: geometry.Polyline, pattern: SignPattern,
                  stdout: TextIO, previous: Optional[geometry.Polyline] = None,
                  polygons: Sequence = ()) -> None:
    out = args.out
    if out != "-" and out.lower().endswith(".svg"):
        curves = [previous, curve] if previous is not None else [curve]
        _write(out, render_svg(curves, polygons, RenderStyle()), stdout)
    elif out == "-" or out.lower().endswith(".csv"):
        _write(out, export_csv(curve), stdout)
    else:
        raise UsageError("--out must end in .svg or .csv (or be -)")


def _run_check(args, pattern: Optional[SignPattern]) -> tuple[CheckReport, Optional[SignPattern]]:
    kind = args.kind
    if kind == "im-lemmas":
        return analysis.imaginary_part_lemmas(args.m, args.tol), None
    assert pattern is not None
    if kind == "self-similar":
        return ifs.self_similarity_check(pattern, args.level, args.tol), pattern
    if kind == "realness":
        return analysis.realness_check(pattern, args.tol), pattern
    if kind == "osc":
        return analysis.osc_check(pattern, analysis.open_set(pattern.m), args.tol), pattern
    if kind == "primitivity":
        _, report = morphism.primitivity_index(morphism.build_morphism(pattern), args.bound)
        return report, pattern
    # conjugacy over seeded random words
    phi = morphism.build_morphism(pattern)
    rng = np.random.default_rng(args.seed)
    worst: Optional[CheckReport] = None
    passed = True
    for _ in range(args.words):
        word = rng.integers(0, phi.alphabet_size, size=args.word_length)
        rep = morphism.conjugacy_check(pattern, word, args.tol)
        passed &= rep.passed
        if worst is None or rep.metrics["deviation"] > worst.metrics["deviation"]:
            worst = rep
    assert worst is not None
    metrics = dict(worst.metrics, words=float(args.words))
    return CheckReport("conjugacy", passed, metrics, worst.notes), pattern


def _dispatch(args, stdout: TextIO) -> int:
    cmd = args.command
    started = time.perf_counter()
    if cmd == "corollary":
        pattern = analysis.corollary_pattern(args.m)
        stdout.write(f"--m {pattern.m} --signs={format_signs(pattern)}\n")
        return 0

    needs_signs = not (cmd == "check" and args.kind == "im-lemmas")
    pattern = resolve_pattern(args) if needs_signs else None

    if cmd == "sequence":
        terms = sequence_prefix(pattern, args.count)
        if args.format == "json":
            stdout.write(dumps({"pattern": list(pattern.deltas), "terms": terms}) + "\n")
        else:
            stdout.write("n,delta\n" + "".join(f"{n},{t}\n" for n, t in enumerate(terms)))
        return 0
    if cmd == "points":
        if args.count < 0:
            raise UsageError("--count must be non-negative")
        sums = geometry.partial_sums(pattern, args.count)
        stdout.write("n,re,im\n" + "".join(
            f"{n},{fmt(z.real)},{fmt(z.imag)}\n" for n, z in enumerate(sums)))
        return 0
    if cmd == "curve":
        _require_contracting(pattern)
        build = geometry.polyline_Q if args.scaled else geometry.polyline_P
        curve = build(pattern, args.level)
        previous = None
        if args.previous and args.level > 0:
            previous = build(pattern, args.level - 1)
            if not args.scaled:
                # previous level drawn at the size of the current one
                factor = geometry.scale_factor(pattern)
                previous = geometry.Polyline(previous.vertices * factor)
        polygons = []
        if args.open_sets:
            if not args.scaled:
                raise UsageError("--open-sets needs --scaled")
            v = analysis.open_set(pattern.m)
            system = ifs.build_ifs(pattern)
            polygons = [v] + [analysis.OpenSetPolygon(_ccw(s(v.vertices))) for s in system.maps]
        _curve_output(args, curve, pattern, stdout, previous, polygons)
        return 0
    if cmd == "attractor":
        _require_contracting(pattern)
        curve = ifs.iterate_ifs(ifs.build_ifs(pattern), args.level)
        _curve_output(args, curve, pattern, stdout)
        return 0
    if cmd == "dimension":
        stdout.write(fmt(analysis.similarity_dimension(pattern)) + "\n")
        return 0
    if cmd == "converge":
        _require_contracting(pattern)
        rows = ifs.limit_distance_report(pattern, args.max_level, args.step)
        stdout.write("level,successive,to_deepest,limit_bound\n" + "".join(
            f"{int(r['level'])},{fmt(r['successive'])},{fmt(r['to_deepest'])},"
            f"{fmt(r['limit_bound'])}\n" for r in rows))
        return 0
    if cmd == "area-ratio":
        ratio = geometry.epsilon_area_ratio(pattern, args.level, args.epsilon, args.resolution)
        stdout.write(fmt(ratio) + "\n")
        return 0
    if cmd == "check":
        report, pat = _run_check(args, pattern)
        if args.json:
            run = RunReport(command=["check", args.kind], pattern=pat, checks=[report])
            if args.timing:
                run.timing_ms = (time.perf_counter() - started) * 1e3
            stdout.write(run.to_json())
        else:
            stdout.write(f"{report.name}: {'PASS' if report.passed else 'FAIL'}\n")
            for key, value in sorted(report.metrics.items()):
                stdout.write(f"  {key} = {fmt(value)}\n")
            if report.notes:
                stdout.write(f"  note: {report.notes}\n")
        return 0 if report.passed else 1
    raise UsageError(f"unknown command {cmd}")


def _ccw(v: np.ndarray) -> np.ndarray:
    return v if analysis.signed_area(v) > 0 else v[::-1]


def cli_main(argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None,
             stderr: Optional[TextIO] = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_normalize_argv(argv))
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else 2
    try:
        return _dispatch(args, stdout)
    except NotContracting as exc:
        stderr.write(f"error: refusing pattern: {exc}\n")
        return 2
    except (UsageError, PatternError, VertexCapExceeded, ValueError) as exc:
        stderr.write(f"error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(cli_main())
