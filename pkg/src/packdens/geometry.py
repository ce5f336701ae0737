"""Exact planar geometry kernel: rational points, robust predicates, circumcircles.

All coordinates are arbitrary-precision rationals (``fractions.Fraction``), so
every predicate returns an error-free three-way sign.  A floating-point filter
handles the easy cases; whenever the filter cannot certify the sign, the
determinant is re-evaluated in exact arithmetic.  The exact path is always the
arbiter.

Orientation convention: counterclockwise turns are Positive.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import Union

Scalar = Fraction
ScalarLike = Union[Fraction, int, float, str]

# Static filter bounds for double-precision determinant evaluation
# (forward error analysis of the 2x2 / 4x4 expansions; eps = 2^-53).
_EPS = 2.0 ** -53
_ORIENT2D_BOUND = (3.0 + 16.0 * _EPS) * _EPS
_INCIRCLE_BOUND = (10.0 + 96.0 * _EPS) * _EPS


class GeometryError(Exception):
    """Base class for kernel errors."""


class CollinearTriangle(GeometryError):
    """Raised when an operation needs a non-degenerate triangle."""


class Sign(IntEnum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1


def scalar(value: ScalarLike) -> Fraction:
    """Convert to an exact rational.  Decimal strings ("1.25"), rational
    strings ("5/4"), ints, floats and Fractions all convert losslessly."""
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


@dataclass(frozen=True)
class Point:
    x: Fraction
    y: Fraction

    def __iter__(self):
        return iter((self.x, self.y))


def point(x: ScalarLike, y: ScalarLike) -> Point:
    """Build a Point from any losslessly convertible coordinate values."""
    return Point(scalar(x), scalar(y))


@dataclass(frozen=True)
class LiftedPoint:
    """A planar point raised onto the unit paraboloid: z = x^2 + y^2."""

    x: Fraction
    y: Fraction
    z: Fraction


@dataclass(frozen=True)
class Circumcircle:
    center: Point
    radius_squared: Fraction


def _sign(value) -> Sign:
    if value > 0:
        return Sign.POSITIVE
    if value < 0:
        return Sign.NEGATIVE
    return Sign.ZERO


def orient_det(ax, ay, bx, by, cx, cy):
    """Twice the signed area of triangle (a, b, c).

    Generic over ints and Fractions; positive for counterclockwise order.
    """
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def incircle_det(ax, ay, bx, by, cx, cy, dx, dy):
    """Incircle determinant; positive iff d is strictly inside the
    circumcircle of the counterclockwise triangle (a, b, c)."""
    adx = ax - dx
    ady = ay - dy
    bdx = bx - dx
    bdy = by - dy
    cdx = cx - dx
    cdy = cy - dy
    return ((adx * adx + ady * ady) * (bdx * cdy - cdx * bdy)
            + (bdx * bdx + bdy * bdy) * (cdx * ady - adx * cdy)
            + (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady))


def orient_sign(ax, ay, bx, by, cx, cy,
                fax, fay, fbx, fby, fcx, fcy) -> int:
    """Sign of orient_det with a float fast path.

    The first six arguments are the exact coordinates (int or Fraction), the
    last six their double approximations.  Returns -1, 0 or 1.
    """
    detleft = (fax - fcx) * (fby - fcy)
    detright = (fay - fcy) * (fbx - fcx)
    det = detleft - detright
    if detleft > 0.0:
        if detright <= 0.0:
            return 1
        detsum = detleft + detright
    elif detleft < 0.0:
        if detright >= 0.0:
            return -1
        detsum = -detleft - detright
    else:
        detsum = abs(detright)
    errbound = _ORIENT2D_BOUND * detsum
    if det > errbound:
        return 1
    if -det > errbound:
        return -1
    exact = orient_det(ax, ay, bx, by, cx, cy)
    return (exact > 0) - (exact < 0)


def incircle_sign(ax, ay, bx, by, cx, cy, dx, dy,
                  fax, fay, fbx, fby, fcx, fcy, fdx, fdy) -> int:
    """Sign of incircle_det with a float fast path (exact arbiter)."""
    adx = fax - fdx
    ady = fay - fdy
    bdx = fbx - fdx
    bdy = fby - fdy
    cdx = fcx - fdx
    cdy = fcy - fdy
    bdxcdy = bdx * cdy
    cdxbdy = cdx * bdy
    alift = adx * adx + ady * ady
    cdxady = cdx * ady
    adxcdy = adx * cdy
    blift = bdx * bdx + bdy * bdy
    adxbdy = adx * bdy
    bdxady = bdx * ady
    clift = cdx * cdx + cdy * cdy
    det = (alift * (bdxcdy - cdxbdy)
           + blift * (cdxady - adxcdy)
           + clift * (adxbdy - bdxady))
    permanent = ((abs(bdxcdy) + abs(cdxbdy)) * alift
                 + (abs(cdxady) + abs(adxcdy)) * blift
                 + (abs(adxbdy) + abs(bdxady)) * clift)
    errbound = _INCIRCLE_BOUND * permanent
    if det > errbound:
        return 1
    if -det > errbound:
        return -1
    exact = incircle_det(ax, ay, bx, by, cx, cy, dx, dy)
    return (exact > 0) - (exact < 0)


def orient2d(a: Point, b: Point, c: Point) -> Sign:
    """Orientation of the triple (a, b, c): Positive for a counterclockwise
    turn, Zero for collinear points, Negative for clockwise.  Exact."""
    return Sign(orient_sign(
        a.x, a.y, b.x, b.y, c.x, c.y,
        float(a.x), float(a.y), float(b.x), float(b.y),
        float(c.x), float(c.y)))


def incircle(a: Point, b: Point, c: Point, d: Point) -> Sign:
    """Position of d relative to the circumcircle of triangle (a, b, c).

    Positive iff d is strictly inside, Zero iff the four points are
    cocircular, Negative iff strictly outside; exact, independent of the
    orientation in which the triangle is supplied.

    Raises CollinearTriangle if (a, b, c) are collinear.
    """
    orientation = orient2d(a, b, c)
    if orientation is Sign.ZERO:
        raise CollinearTriangle(f"collinear triangle {a}, {b}, {c}")
    raw = incircle_sign(
        a.x, a.y, b.x, b.y, c.x, c.y, d.x, d.y,
        float(a.x), float(a.y), float(b.x), float(b.y),
        float(c.x), float(c.y), float(d.x), float(d.y))
    return Sign(raw * int(orientation))


def orient3d(p: LiftedPoint, q: LiftedPoint, r: LiftedPoint,
             s: LiftedPoint) -> Sign:
    """Orientation of s relative to the plane through p, q, r in 3-space:
    sign of det[q-p; r-p; s-p].  Exact (no float filter; used for
    cross-checks, not in hot paths)."""
    ux, uy, uz = q.x - p.x, q.y - p.y, q.z - p.z
    vx, vy, vz = r.x - p.x, r.y - p.y, r.z - p.z
    wx, wy, wz = s.x - p.x, s.y - p.y, s.z - p.z
    det = (ux * (vy * wz - vz * wy)
           - uy * (vx * wz - vz * wx)
           + uz * (vx * wy - vy * wx))
    return _sign(det)


def lift(p: Point) -> LiftedPoint:
    """Lift p onto the paraboloid: (x, y) -> (x, y, x^2 + y^2)."""
    return LiftedPoint(p.x, p.y, p.x * p.x + p.y * p.y)


def distance_squared(a: Point, b: Point) -> Fraction:
    dx = a.x - b.x
    dy = a.y - b.y
    return dx * dx + dy * dy


def circumcircle(a: Point, b: Point, c: Point) -> Circumcircle:
    """Exact circumcircle of a non-degenerate triangle.

    The center is the perpendicular-bisector intersection; the radius is kept
    squared so everything stays rational.

    Raises CollinearTriangle for degenerate input.
    """
    d = 2 * orient_det(a.x, a.y, b.x, b.y, c.x, c.y)
    if d == 0:
        raise CollinearTriangle(f"collinear triangle {a}, {b}, {c}")
    la = a.x * a.x + a.y * a.y
    lb = b.x * b.x + b.y * b.y
    lc = c.x * c.x + c.y * c.y
    ux = (la * (b.y - c.y) + lb * (c.y - a.y) + lc * (a.y - b.y)) / d
    uy = (la * (c.x - b.x) + lb * (a.x - c.x) + lc * (b.x - a.x)) / d
    center = Point(Fraction(ux), Fraction(uy))
    return Circumcircle(center, distance_squared(center, a))


def triangle_area(a: Point, b: Point, c: Point) -> Fraction:
    """Exact unsigned area of triangle (a, b, c)."""
    return abs(orient_det(a.x, a.y, b.x, b.y, c.x, c.y)) / 2
