"""packdens command line: generate | validate | saturate | triangulate |
analyze | certify | render.

Exit codes: 0 success/certified, 1 check violation, 2 input error.  Reports
are JSON-shaped text on stdout; exact quantities appear as rational strings,
approximate ones as 17-significant-digit decimals.  With --outdir, certify
and analyze also write the report, a per-triangle CSV table and PNG figures
to files.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .density import (
    DENSITY_TOLERANCE,
    PACKING_BOUND,
    aggregate,
    all_triangle_stats,
    check_lemma1,
    check_lemma2,
    interior_triangle_indices,
)
from .generators import GeneratorError, GeneratorSpec, Kind, generate
from .geometry import distance_squared
from .pointfile import PointFileError, format_point_file, parse_point_file
from .render import DEFAULT_LAYERS, SVG_LAYERS, render_svg, write_figures, \
    write_triangle_csv
from .saturation import (
    Configuration,
    ConfigurationError,
    InvalidWindow,
    OutOfWindow,
    PairTooClose,
    Window,
    _saturate_engine,
    find_witness,
    validate,
)
from .triangulation import (
    TriangulationError,
    delaunay,
    triangulation_edges,
    verify_delaunay,
)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2


def _fmt17(x: float) -> str:
    return f"{x:.17g}"


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise PointFileError(f"cannot read {path}: {exc}") from exc


def _parse_window_flag(text: str) -> Window:
    parts = text.split(",")
    if len(parts) != 4:
        raise InvalidWindow("window flag needs x0,y0,x1,y1")
    return Window(*(Fraction(p.strip()) for p in parts))


def _fail_input(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_INPUT


def _validated_config(args) -> tuple[Configuration, tuple[int, ...]]:
    pf = parse_point_file(_read_input(args.input))
    try:
        config = validate(pf.points, pf.window)
    except PairTooClose as exc:
        raise PointFileError(
            f"points on lines {pf.line_numbers[exc.first]} and "
            f"{pf.line_numbers[exc.second]} are closer than 2 "
            f"(distance_squared = {exc.distance_squared})") from exc
    except OutOfWindow as exc:
        raise PointFileError(
            f"point on line {pf.line_numbers[exc.index]} "
            f"lies outside the window") from exc
    return config, pf.line_numbers


def _min_pairwise(tri) -> Optional[Fraction]:
    best = None
    for u, v in triangulation_edges(tri):
        d2 = distance_squared(tri.points[u], tri.points[v])
        if best is None or d2 < best:
            best = d2
    return best


def _build_report(*, n_points: int, n_inserted: int, tri, stats,
                  win: Window, margin: Fraction, verification,
                  saturation_witness=None) -> tuple[dict, int, str]:
    """Assemble the report dict; returns (report, exit_code, failure_name)."""
    interior = interior_triangle_indices(tri, win, margin)
    fallback = not interior
    agg_indices = interior if interior else list(range(len(stats)))
    agg_stats = [stats[i] for i in agg_indices]
    rep = aggregate(agg_stats, saturated=True, win=win)
    lemma1 = check_lemma1(stats, saturated=True, win=win)
    lemma2 = check_lemma2(stats, win=win)
    min_d2 = _min_pairwise(tri)

    failure = ""
    if saturation_witness is not None:
        failure = "saturation"
    elif not verification.ok:
        failure = "delaunay-verification"
    elif not lemma1.ok:
        failure = "lemma1"
    elif not lemma2.ok:
        failure = "lemma2"
    elif not rep.bound_ok:
        failure = "bound"

    report = {
        "schema_version": 1,
        "n_points": n_points,
        "n_inserted": n_inserted,
        "n_triangles": len(tri.triangles),
        "min_pairwise_distance_squared":
            str(min_d2) if min_d2 is not None else None,
        "max_circumradius_squared":
            str(max(s.circum.radius_squared for s in stats)),
        "max_largest_angle": _fmt17(max(s.largest_angle for s in stats)),
        "min_density": _fmt17(rep.min_density),
        "max_density": _fmt17(rep.max_density),
        "overall_density": _fmt17(rep.overall_density),
        "bound": _fmt17(PACKING_BOUND),
        "lemma1_ok": lemma1.ok,
        "lemma2_ok": lemma2.ok,
        "bound_ok": rep.bound_ok,
        "interior_margin": str(margin),
        "n_interior_triangles": len(interior),
        "interior_fallback": fallback,
        "witnesses": {
            "saturation": (None if saturation_witness is None else
                           [str(saturation_witness.location.x),
                            str(saturation_witness.location.y)]),
            "lemma1_triangle": lemma1.witness,
            "lemma2_triangle": lemma2.witness,
            "delaunay": (None if verification.ok else
                         [verification.triangle_index,
                          verification.point_index]),
            "boundary_exempt_triangles": len(lemma1.exempt),
        },
    }
    code = EXIT_OK if not failure else EXIT_VIOLATION
    return report, code, failure


def _degenerate_report(n_points: int, witness) -> dict:
    """Report skeleton for inputs with no triangulation (fewer than three
    points or all collinear): only the saturation witness is meaningful."""
    return {
        "schema_version": 1,
        "n_points": n_points,
        "n_inserted": 0,
        "n_triangles": 0,
        "min_pairwise_distance_squared": None,
        "max_circumradius_squared": None,
        "max_largest_angle": None,
        "min_density": None,
        "max_density": None,
        "overall_density": None,
        "bound": _fmt17(PACKING_BOUND),
        "lemma1_ok": None,
        "lemma2_ok": None,
        "bound_ok": None,
        "interior_margin": None,
        "n_interior_triangles": 0,
        "interior_fallback": False,
        "witnesses": {
            "saturation": [str(witness.location.x), str(witness.location.y)],
            "lemma1_triangle": None,
            "lemma2_triangle": None,
            "delaunay": None,
            "boundary_exempt_triangles": 0,
        },
    }


def _emit_report(report: dict, args, tri, stats, win, margin) -> None:
    text = json.dumps(report, indent=2) + "\n"
    sys.stdout.write(text)
    outdir = getattr(args, "outdir", None)
    if outdir:
        out = Path(outdir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(text)
        write_triangle_csv(out / "triangles.csv", stats)
        interior = interior_triangle_indices(tri, win, margin)
        write_figures(out, tri, win, stats, interior)


def cmd_generate(args) -> int:
    try:
        win = _parse_window_flag(args.window)
        spec = GeneratorSpec(kind=Kind(args.kind), window=win,
                             spacing=Fraction(args.spacing),
                             perturbation=Fraction(args.perturb),
                             seed=args.seed)
        config = generate(spec)
    except (GeneratorError, ConfigurationError, ValueError) as exc:
        return _fail_input(str(exc))
    sys.stdout.write(format_point_file(
        config.points, config.window,
        comment=f"packdens generate kind={args.kind} spacing={args.spacing} "
                f"seed={args.seed}"))
    return EXIT_OK


def cmd_validate(args) -> int:
    try:
        config, _lines = _validated_config(args)
    except (PointFileError, ConfigurationError) as exc:
        return _fail_input(str(exc))
    print(f"valid: n_points={len(config.points)} "
          f"window=[{config.window.xmin},{config.window.ymin},"
          f"{config.window.xmax},{config.window.ymax}]")
    return EXIT_OK


def cmd_saturate(args) -> int:
    try:
        config, _lines = _validated_config(args)
    except (PointFileError, ConfigurationError) as exc:
        return _fail_input(str(exc))
    result, _engine, inserted = _saturate_engine(config)
    sys.stdout.write(format_point_file(
        result.points, result.window,
        inserted_from=len(result.points) - inserted,
        comment=f"packdens saturate: {inserted} inserted"))
    return EXIT_OK


def cmd_triangulate(args) -> int:
    try:
        config, _lines = _validated_config(args)
        tri = delaunay(config.points)
    except (PointFileError, ConfigurationError, TriangulationError) as exc:
        return _fail_input(str(exc))
    edges = triangulation_edges(tri)
    print(f"# points {len(tri.points)}")
    print(f"# triangles {len(tri.triangles)}")
    print(f"# edges {len(edges)}")
    for u, v in edges:
        print(f"{u} {v}")
    return EXIT_OK


def cmd_certify(args) -> int:
    try:
        config, _lines = _validated_config(args)
        margin = Fraction(args.interior_margin)
    except (PointFileError, ConfigurationError, ValueError) as exc:
        return _fail_input(str(exc))
    n_original = len(config.points)
    result, engine, inserted = _saturate_engine(config)
    engine.canonical_flips()
    tri = engine.to_triangulation()
    verification = verify_delaunay(tri)
    stats = all_triangle_stats(tri)
    report, code, failure = _build_report(
        n_points=n_original, n_inserted=inserted, tri=tri, stats=stats,
        win=config.window, margin=margin, verification=verification)
    _emit_report(report, args, tri, stats, config.window, margin)
    if failure:
        print(f"violation: {failure}", file=sys.stderr)
    return code


def cmd_analyze(args) -> int:
    try:
        config, _lines = _validated_config(args)
        margin = Fraction(args.interior_margin)
        witness = find_witness(config)
    except (PointFileError, ConfigurationError, ValueError) as exc:
        return _fail_input(str(exc))
    try:
        tri = delaunay(config.points)
    except TriangulationError as exc:
        if witness is not None:
            # degenerate and unsaturated: the witness explains the rejection
            report = _degenerate_report(len(config.points), witness)
            sys.stdout.write(json.dumps(report, indent=2) + "\n")
            print(f"violation: not saturated, witness at "
                  f"({witness.location.x}, {witness.location.y})",
                  file=sys.stderr)
            return EXIT_VIOLATION
        return _fail_input(str(exc))
    verification = verify_delaunay(tri)
    stats = all_triangle_stats(tri)
    report, code, failure = _build_report(
        n_points=len(config.points), n_inserted=0, tri=tri, stats=stats,
        win=config.window, margin=margin, verification=verification,
        saturation_witness=witness)
    _emit_report(report, args, tri, stats, config.window, margin)
    if failure == "saturation":
        print(f"violation: not saturated, witness at "
              f"({witness.location.x}, {witness.location.y})",
              file=sys.stderr)
    elif failure:
        print(f"violation: {failure}", file=sys.stderr)
    return code


def cmd_render(args) -> int:
    try:
        config, _lines = _validated_config(args)
        tri = delaunay(config.points)
    except (PointFileError, ConfigurationError, TriangulationError) as exc:
        return _fail_input(str(exc))
    stats = all_triangle_stats(tri)
    layers = DEFAULT_LAYERS if args.layers == "default" \
        else tuple(s.strip() for s in args.layers.split(",") if s.strip())
    unknown = set(layers) - set(SVG_LAYERS)
    if unknown:
        return _fail_input(f"unknown layers: {sorted(unknown)} "
                           f"(available: {', '.join(SVG_LAYERS)})")
    svg = render_svg(tri, config.window, stats, layers)
    if args.out and args.out != "-":
        Path(args.out).write_text(svg)
    else:
        sys.stdout.write(svg)
    return EXIT_OK


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", nargs="?", default="-",
                   help="point file path, or - for stdin (default)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="packdens",
        description="circle-packing density certifier")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="emit a generated configuration")
    p.add_argument("--kind", required=True,
                   choices=[k.value for k in Kind])
    p.add_argument("--window", required=True, help="x0,y0,x1,y1")
    p.add_argument("--spacing", default="2")
    p.add_argument("--perturb", default="0")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("validate", help="check configuration invariants")
    _add_input(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("saturate", help="insert points until saturated")
    _add_input(p)
    p.set_defaults(func=cmd_saturate)

    p = sub.add_parser("triangulate", help="emit the Delaunay edge list")
    _add_input(p)
    p.set_defaults(func=cmd_triangulate)

    p = sub.add_parser("analyze",
                       help="report on an already-saturated configuration")
    _add_input(p)
    p.add_argument("--interior-margin", default="4")
    p.add_argument("--outdir", default=None,
                   help="also write report.json, triangles.csv and figures")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("certify",
                       help="validate, saturate, triangulate, verify, "
                            "and check the density bound")
    _add_input(p)
    p.add_argument("--interior-margin", default="4")
    p.add_argument("--outdir", default=None,
                   help="also write report.json, triangles.csv and figures")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("render", help="emit an SVG drawing")
    _add_input(p)
    p.add_argument("--out", default="-")
    p.add_argument("--layers", default="default",
                   help=f"comma-separated from: {', '.join(SVG_LAYERS)}")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
