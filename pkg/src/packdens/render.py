"""Figure output: deterministic SVG scenes plus matplotlib report figures.

The SVG path is hand-rolled so the byte stream is reproducible (fixed
formatting, fixed element order) and snapshot-testable.  Report figures
(PNG) and the per-triangle CSV table ride along with the JSON report when an
output directory is requested.
"""

from __future__ import annotations

import csv
import math
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.collections import LineCollection, PolyCollection
from matplotlib.figure import Figure
from matplotlib.patches import Circle, Rectangle

from .density import PACKING_BOUND, TriangleStats
from .saturation import Window
from .triangulation import Triangulation, triangulation_edges

SVG_LAYERS = ("window", "heat", "circumcircles", "edges", "circles")
DEFAULT_LAYERS = ("window", "heat", "edges", "circles")

_HEAT_LOW = math.pi / 4            # square-lattice density anchors the scale
_HEAT_COLD = (0x3B, 0x4C, 0xC0)
_HEAT_HOT = (0xB4, 0x04, 0x26)


def _fmt(value: float) -> str:
    return f"{value:.6f}"


def heat_color(density: float) -> str:
    """Linear color scale from pi/4 (cold) to pi/sqrt(12) (hot)."""
    span = PACKING_BOUND - _HEAT_LOW
    t = (density - _HEAT_LOW) / span
    t = min(1.0, max(0.0, t))
    rgb = tuple(round(c0 + t * (c1 - c0))
                for c0, c1 in zip(_HEAT_COLD, _HEAT_HOT))
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def render_svg(t: Triangulation, win: Window,
               stats: Sequence[TriangleStats],
               layers: Sequence[str] = DEFAULT_LAYERS) -> str:
    """Self-contained SVG 1.1 document; deterministic for a given input.

    Layers: window rectangle, density heat fill, circumcircles, Delaunay
    edges, unit circles.
    """
    margin = 1.5
    x0 = float(win.xmin) - margin
    y1 = float(win.ymax) + margin
    width = float(win.width) + 2 * margin
    height = float(win.height) + 2 * margin

    def sx(x: float) -> str:
        return _fmt(x - x0)

    def sy(y: float) -> str:
        return _fmt(y1 - y)

    out = ['<?xml version="1.0" encoding="UTF-8"?>']
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_fmt(width * 24)}" height="{_fmt(height * 24)}" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">')
    out.append(f'<rect x="0" y="0" width="{_fmt(width)}" '
               f'height="{_fmt(height)}" fill="#ffffff"/>')

    pts = [(float(p.x), float(p.y)) for p in t.points]
    chosen = set(layers)

    if "window" in chosen:
        out.append('<g id="window">')
        out.append(
            f'<rect x="{sx(float(win.xmin))}" y="{sy(float(win.ymax))}" '
            f'width="{_fmt(float(win.width))}" '
            f'height="{_fmt(float(win.height))}" '
            f'fill="none" stroke="#222222" stroke-width="0.06"/>')
        out.append('</g>')

    if "heat" in chosen:
        out.append('<g id="heat" stroke="none">')
        for stat in stats:
            a, b, c = (pts[v] for v in stat.triangle)
            out.append(
                f'<polygon points="{sx(a[0])},{sy(a[1])} '
                f'{sx(b[0])},{sy(b[1])} {sx(c[0])},{sy(c[1])}" '
                f'fill="{heat_color(stat.density)}" fill-opacity="0.85"/>')
        out.append('</g>')

    if "circumcircles" in chosen:
        out.append('<g id="circumcircles" fill="none" stroke="#888888" '
                   'stroke-width="0.02">')
        for stat in stats:
            cx = float(stat.circum.center.x)
            cy = float(stat.circum.center.y)
            r = math.sqrt(float(stat.circum.radius_squared))
            out.append(f'<circle cx="{sx(cx)}" cy="{sy(cy)}" '
                       f'r="{_fmt(r)}"/>')
        out.append('</g>')

    if "edges" in chosen:
        out.append('<g id="edges" stroke="#333333" stroke-width="0.03">')
        for u, v in triangulation_edges(t):
            out.append(
                f'<line x1="{sx(pts[u][0])}" y1="{sy(pts[u][1])}" '
                f'x2="{sx(pts[v][0])}" y2="{sy(pts[v][1])}"/>')
        out.append('</g>')

    if "circles" in chosen:
        out.append('<g id="circles" fill="none" stroke="#1a6faf" '
                   'stroke-width="0.04">')
        for x, y in pts:
            out.append(f'<circle cx="{sx(x)}" cy="{sy(y)}" r="1.000000"/>')
        out.append('</g>')

    out.append('</svg>')
    return "\n".join(out) + "\n"


def write_triangle_csv(path: Path, stats: Sequence[TriangleStats]) -> None:
    """Delimited per-triangle table; exact quantities as rational strings."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["triangle", "v0", "v1", "v2", "area",
                         "circumradius_squared", "largest_angle", "density",
                         "equilateral_side2"])
        for stat in stats:
            writer.writerow([
                stat.index, stat.triangle.v0, stat.triangle.v1,
                stat.triangle.v2, str(stat.area),
                str(stat.circum.radius_squared),
                f"{stat.largest_angle:.17g}", f"{stat.density:.17g}",
                int(stat.is_equilateral_side2),
            ])


def write_figures(outdir: Path, t: Triangulation, win: Window,
                  stats: Sequence[TriangleStats],
                  interior: Optional[Sequence[int]] = None) -> list[Path]:
    """Render the report figures (PNG) into outdir:

    - configuration.png: unit circles, Delaunay edges, density heat fill
    - densities.png: per-triangle density histogram against the bound
    """
    outdir.mkdir(parents=True, exist_ok=True)
    pts = [(float(p.x), float(p.y)) for p in t.points]
    written = []

    fig = Figure(figsize=(8, 8))
    FigureCanvasAgg(fig)
    ax = fig.add_subplot(111)
    polys = [[pts[v] for v in stat.triangle] for stat in stats]
    colors = [heat_color(stat.density) for stat in stats]
    ax.add_collection(PolyCollection(polys, facecolors=colors, alpha=0.8,
                                     edgecolors="none"))
    segs = [(pts[u], pts[v]) for u, v in triangulation_edges(t)]
    ax.add_collection(LineCollection(segs, colors="#333333", linewidths=0.6))
    for x, y in pts:
        ax.add_patch(Circle((x, y), 1.0, fill=False, color="#1a6faf",
                            linewidth=0.7))
    ax.add_patch(Rectangle((float(win.xmin), float(win.ymin)),
                           float(win.width), float(win.height),
                           fill=False, color="black", linewidth=1.2))
    ax.set_aspect("equal")
    ax.set_xlim(float(win.xmin) - 1.5, float(win.xmax) + 1.5)
    ax.set_ylim(float(win.ymin) - 1.5, float(win.ymax) + 1.5)
    ax.set_title("configuration and per-triangle density")
    path = outdir / "configuration.png"
    fig.savefig(path, dpi=110)
    written.append(path)

    fig = Figure(figsize=(7, 4.5))
    FigureCanvasAgg(fig)
    ax = fig.add_subplot(111)
    densities = [stat.density for stat in stats]
    ax.hist(densities, bins=40, color="#4878a8", edgecolor="white")
    ax.axvline(PACKING_BOUND, color="#b40426", linestyle="--",
               label="pi/sqrt(12)")
    ax.axvline(_HEAT_LOW, color="#3b4cc0", linestyle=":", label="pi/4")
    if interior:
        chosen = set(interior)
        inner = [stat.density for stat in stats if stat.index in chosen]
        if inner:
            ax.hist(inner, bins=40, color="#e8a33d", alpha=0.7,
                    edgecolor="white", label="interior")
    ax.set_xlabel("triangle density")
    ax.set_ylabel("count")
    ax.legend(loc="upper left")
    path = outdir / "densities.png"
    fig.savefig(path, dpi=110)
    written.append(path)
    return written
