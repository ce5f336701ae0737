"""Per-triangle density analysis and the packing bound pi/sqrt(12).

Everything algebraic is exact: areas, squared side lengths and squared
circumradii are rationals, so the bound checks "circumradius < 2" and
"area^2 >= 3" are decided without tolerances.  Only where pi enters (angles,
densities) do high-precision floats appear, carrying a fixed tolerance.

Window-boundary rule: the circumcenter-insertion argument that caps the
circumradius of a Delaunay triangle only applies when the circumcenter lies
inside the region being saturated.  Flat triangles hugging the window
boundary can have empty circumdisks that bulge outside the window, so their
circumradii are unconstrained; the checks exempt exactly those triangles when
a window is supplied, and report them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import mpmath
import numpy as np

from .geometry import Circumcircle, Point
from .saturation import Window
from .triangulation import Triangle, Triangulation

DENSITY_TOLERANCE = 1e-12
PACKING_BOUND = 0.9068996821171089  # pi/sqrt(12), correctly rounded double

_DPS = 30  # working decimal precision for the transcendental steps
_THREE = Fraction(3)
_FOUR = Fraction(4)


class DensityError(Exception):
    pass


class DegenerateTriangle(DensityError):
    pass


class EmptyTriangulation(DensityError):
    pass


@dataclass(frozen=True)
class TriangleStats:
    """Exact and high-precision derived data for one Delaunay triangle.

    The density is the fraction of the triangle covered by the unit disks at
    its vertices, which equals (pi/2) / area for Delaunay triangles of a
    saturated configuration.
    """

    index: int
    triangle: Triangle
    area: Fraction
    circum: Circumcircle
    side_lengths_squared: tuple[Fraction, Fraction, Fraction]
    largest_angle: float
    density: float
    is_equilateral_side2: bool


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    witness: Optional[int]
    exempt: tuple[int, ...]
    equality: tuple[int, ...] = ()


@dataclass(frozen=True)
class DensityReport:
    triangle_count: int
    min_density: float
    max_density: float
    mean_density: float
    max_largest_angle: float
    max_circumradius_squared: Fraction
    overall_density: float
    bound: float
    lemma1_ok: bool
    lemma2_ok: bool
    bound_ok: bool
    min_density_triangle: int
    max_density_triangle: int


def _scaled_ints(points: Sequence[Point]) -> tuple[int, list[int], list[int]]:
    denom = 1
    for p in points:
        denom = denom * p.x.denominator // math.gcd(denom, p.x.denominator)
        denom = denom * p.y.denominator // math.gcd(denom, p.y.denominator)
    xi = [p.x.numerator * (denom // p.x.denominator) for p in points]
    yi = [p.y.numerator * (denom // p.y.denominator) for p in points]
    return denom, xi, yi


def _stats_one(index: int, tri: Triangle, scale: int,
               xi: Sequence[int], yi: Sequence[int]) -> TriangleStats:
    # caller must already hold an mpmath.workdps(_DPS) context
    a, b, c = tri
    ax, ay, bx, by, cx, cy = xi[a], yi[a], xi[b], yi[b], xi[c], yi[c]
    det = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    if det == 0:
        raise DegenerateTriangle(f"triangle {index} has zero area")
    s2 = scale * scale
    area = Fraction(abs(det), 2 * s2)

    d2 = 2 * det
    la = ax * ax + ay * ay
    lb = bx * bx + by * by
    lc = cx * cx + cy * cy
    ux = la * (by - cy) + lb * (cy - ay) + lc * (ay - by)
    uy = la * (cx - bx) + lb * (ax - cx) + lc * (bx - ax)
    center = Point(Fraction(ux, d2 * scale), Fraction(uy, d2 * scale))
    r2 = Fraction((ax * d2 - ux) ** 2 + (ay * d2 - uy) ** 2, d2 * d2 * s2)

    sides = (
        Fraction((cx - bx) ** 2 + (cy - by) ** 2, s2),   # opposite a
        Fraction((ax - cx) ** 2 + (ay - cy) ** 2, s2),   # opposite b
        Fraction((bx - ax) ** 2 + (by - ay) ** 2, s2),   # opposite c
    )
    longest = max(range(3), key=lambda k: sides[k])
    opp = sides[longest]
    adj1 = sides[(longest + 1) % 3]
    adj2 = sides[(longest + 2) % 3]

    num = adj1 + adj2 - opp
    prod = adj1 * adj2
    cosine = (mpmath.mpf(num.numerator) / mpmath.mpf(num.denominator)
              / (2 * mpmath.sqrt(mpmath.mpf(prod.numerator)
                                 / mpmath.mpf(prod.denominator))))
    cosine = max(-1, min(1, cosine))
    angle = float(mpmath.acos(cosine))
    dens = float(mpmath.pi / 2
                 * mpmath.mpf(area.denominator) / mpmath.mpf(area.numerator))

    return TriangleStats(
        index=index,
        triangle=tri,
        area=area,
        circum=Circumcircle(center, r2),
        side_lengths_squared=sides,
        largest_angle=angle,
        density=dens,
        is_equilateral_side2=(sides[0] == _FOUR and sides[1] == _FOUR
                              and sides[2] == _FOUR),
    )


def triangle_stats(t: Triangulation, index: int) -> TriangleStats:
    """Stats for one triangle: exact area, circumcircle and squared sides;
    largest angle and density at high precision."""
    tri = t.triangles[index]
    pts = [t.points[v] for v in tri]
    scale, xi, yi = _scaled_ints(pts)
    with mpmath.workdps(_DPS):
        local = _stats_one(index, Triangle(0, 1, 2), scale, xi, yi)
    return TriangleStats(
        index=index, triangle=tri, area=local.area, circum=local.circum,
        side_lengths_squared=local.side_lengths_squared,
        largest_angle=local.largest_angle, density=local.density,
        is_equilateral_side2=local.is_equilateral_side2)


def all_triangle_stats(t: Triangulation) -> list[TriangleStats]:
    """Stats for every triangle, sharing one integer rescaling of the
    vertex coordinates."""
    scale, xi, yi = _scaled_ints(t.points)
    with mpmath.workdps(_DPS):
        return [_stats_one(i, tri, scale, xi, yi)
                for i, tri in enumerate(t.triangles)]


def _is_exempt(stat: TriangleStats, win: Optional[Window]) -> bool:
    return win is not None and not win.contains(stat.circum.center)


def check_lemma1(stats: Sequence[TriangleStats], saturated: bool = True,
                 win: Optional[Window] = None) -> CheckResult:
    """Angle/circumradius bounds for Delaunay triangles of a saturated
    configuration: largest angle in [pi/3, 2*pi/3) and circumradius < 2.

    The strict upper bound is decided exactly through the circumradius
    (radius_squared < 4); the float angle only enforces the lower bound.
    With a window, triangles whose circumcenter falls outside it are exempt
    (that circumcenter was never insertable) and reported as such.  When
    ``saturated`` is False the bounds are not claimed and the check passes
    vacuously.
    """
    exempt = []
    witness = None
    lower = math.pi / 3 - DENSITY_TOLERANCE
    for stat in stats:
        if _is_exempt(stat, win):
            exempt.append(stat.index)
            continue
        if not saturated:
            continue
        if stat.circum.radius_squared >= _FOUR or stat.largest_angle < lower:
            witness = stat.index
            break
    return CheckResult(ok=witness is None, witness=witness,
                       exempt=tuple(exempt))


def check_lemma2(stats: Sequence[TriangleStats],
                 win: Optional[Window] = None) -> CheckResult:
    """Density bound pi/sqrt(12) per triangle, decided exactly via
    area^2 >= 3; the same window exemption as the angle check applies.

    ``equality`` lists triangles attaining the bound within the density
    tolerance; the regular side-2 triangle is the only exact attainer, and
    ``is_equilateral_side2`` on the stats records that exact test.
    """
    exempt = []
    equality = []
    witness = None
    for stat in stats:
        if _is_exempt(stat, win):
            exempt.append(stat.index)
            continue
        area2 = stat.area * stat.area
        if area2 < _THREE or stat.density > PACKING_BOUND + DENSITY_TOLERANCE:
            if witness is None:
                witness = stat.index
            continue
        if abs(stat.density - PACKING_BOUND) <= DENSITY_TOLERANCE:
            equality.append(stat.index)
    return CheckResult(ok=witness is None, witness=witness,
                       exempt=tuple(exempt), equality=tuple(equality))


def aggregate(stats: Sequence[TriangleStats], saturated: bool = True,
              win: Optional[Window] = None) -> DensityReport:
    """Weighted-average density over the given triangles.

    The weighted average of (pi/2)/area with weights area collapses to
    (count * pi/2) / total area; both forms are computed and cross-checked.
    """
    if not stats:
        raise EmptyTriangulation("no triangles to aggregate")
    total_area = Fraction(0)
    for stat in stats:
        total_area += stat.area
    with mpmath.workdps(_DPS):
        overall = float(len(stats) * mpmath.pi / 2
                        * mpmath.mpf(total_area.denominator)
                        / mpmath.mpf(total_area.numerator))
    weighted = math.fsum(stat.density * float(stat.area) for stat in stats)
    cross = weighted / float(total_area)
    if abs(cross - overall) > 1e-9 * max(1.0, overall):  # pragma: no cover
        raise ArithmeticError("weighted-average cross-check failed")

    densities = [stat.density for stat in stats]
    lemma1 = check_lemma1(stats, saturated=saturated, win=win)
    lemma2 = check_lemma2(stats, win=win)
    i_min = min(range(len(stats)), key=lambda k: densities[k])
    i_max = max(range(len(stats)), key=lambda k: densities[k])
    return DensityReport(
        triangle_count=len(stats),
        min_density=densities[i_min],
        max_density=densities[i_max],
        mean_density=math.fsum(densities) / len(densities),
        max_largest_angle=max(stat.largest_angle for stat in stats),
        max_circumradius_squared=max(stat.circum.radius_squared
                                     for stat in stats),
        overall_density=overall,
        bound=PACKING_BOUND,
        lemma1_ok=lemma1.ok,
        lemma2_ok=lemma2.ok,
        bound_ok=overall <= PACKING_BOUND + DENSITY_TOLERANCE,
        min_density_triangle=stats[i_min].index,
        max_density_triangle=stats[i_max].index,
    )


def interior_triangle_indices(t: Triangulation, win: Window,
                              margin: Fraction) -> list[int]:
    """Triangles whose vertices all sit at least ``margin`` away from the
    window boundary (exact test); used to control hull-boundary effects."""
    deep = [win.boundary_depth(p) >= margin for p in t.points]
    return [i for i, tri in enumerate(t.triangles)
            if deep[tri.v0] and deep[tri.v1] and deep[tri.v2]]


@dataclass(frozen=True)
class WedgeCoverage:
    estimate: float
    std_error: float
    samples: int
    degenerate: bool


def wedge_coverage_check(t: Triangulation, index: int, samples: int,
                         seed: int) -> WedgeCoverage:
    """Monte-Carlo area of the triangle covered by the unit disks at its
    vertices.

    For triangles with all sides >= 2 and circumradius < 2 the three disks
    are disjoint inside the triangle and each vertex wedge is a full unit
    sector, so the covered area is half the angle sum: pi/2.
    """
    if samples <= 0:
        return WedgeCoverage(0.0, 0.0, 0, True)
    tri = t.triangles[index]
    ax, ay = float(t.points[tri.v0].x), float(t.points[tri.v0].y)
    bx, by = float(t.points[tri.v1].x), float(t.points[tri.v1].y)
    cx, cy = float(t.points[tri.v2].x), float(t.points[tri.v2].y)
    area = abs((bx - ax) * (cy - ay) - (by - ay) * (cx - ax)) / 2.0

    rng = np.random.default_rng(seed)
    u = rng.random(samples)
    v = rng.random(samples)
    over = u + v > 1.0
    u[over] = 1.0 - u[over]
    v[over] = 1.0 - v[over]
    px = ax + u * (bx - ax) + v * (cx - ax)
    py = ay + u * (by - ay) + v * (cy - ay)
    covered = ((px - ax) ** 2 + (py - ay) ** 2 < 1.0)
    covered |= ((px - bx) ** 2 + (py - by) ** 2 < 1.0)
    covered |= ((px - cx) ** 2 + (py - cy) ** 2 < 1.0)
    frac = float(covered.mean())
    estimate = frac * area
    std_error = area * math.sqrt(max(frac * (1.0 - frac), 0.0) / samples)
    return WedgeCoverage(estimate, std_error, samples, False)
