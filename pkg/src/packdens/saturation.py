"""Circle configurations and window saturation.

A configuration is a set of unit-circle centers with pairwise distance >= 2
inside a rectangular window.  A configuration is window-saturated when no
point of the window keeps distance >= 2 from every center, i.e. no further
unit circle fits.

The spot with maximum clearance over a convex window is attained at a Voronoi
vertex inside the window, at a crossing of a Voronoi edge with the window
boundary, or at a window corner.  Voronoi vertices are Delaunay circumcenters
and Voronoi edges are the duals of Delaunay edges, so the Delaunay structure
yields a complete, exact candidate set.  Configurations with fewer than three
points, or collinear ones, have no triangulation and fall back to a corner +
grid scan (some corner always clears 2 in that regime, so the fallback never
misses saturation).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .geometry import Point, Scalar, ScalarLike, distance_squared, scalar
from .triangulation import GHOST, AllCollinear, TooFewPoints, _Engine

_FOUR = Fraction(4)
_FLOAT_BAND = 1e-6  # screening slack; exact arithmetic settles anything inside


class ConfigurationError(Exception):
    """Base class for configuration validation errors."""


class InvalidWindow(ConfigurationError):
    pass


class PairTooClose(ConfigurationError):
    def __init__(self, first: int, second: int, dist_squared: Fraction):
        self.first = first
        self.second = second
        self.distance_squared = dist_squared
        super().__init__(
            f"points {first} and {second} are closer than 2 "
            f"(distance_squared = {dist_squared})")


class OutOfWindow(ConfigurationError):
    def __init__(self, index: int, location: Point):
        self.index = index
        self.location = location
        super().__init__(f"point {index} at ({location.x}, {location.y}) "
                         f"lies outside the window")


@dataclass(frozen=True)
class Window:
    xmin: Fraction
    ymin: Fraction
    xmax: Fraction
    ymax: Fraction

    def __post_init__(self):
        if self.xmax - self.xmin < 4 or self.ymax - self.ymin < 4:
            raise InvalidWindow(
                "window must be at least 4 units in each direction")

    @property
    def width(self) -> Fraction:
        return self.xmax - self.xmin

    @property
    def height(self) -> Fraction:
        return self.ymax - self.ymin

    def contains(self, p: Point) -> bool:
        return (self.xmin <= p.x <= self.xmax
                and self.ymin <= p.y <= self.ymax)

    def corners(self) -> tuple[Point, Point, Point, Point]:
        return (Point(self.xmin, self.ymin), Point(self.xmax, self.ymin),
                Point(self.xmax, self.ymax), Point(self.xmin, self.ymax))

    def clamp(self, x: Fraction, y: Fraction) -> tuple[Fraction, Fraction]:
        return (min(max(x, self.xmin), self.xmax),
                min(max(y, self.ymin), self.ymax))

    def boundary_depth(self, p: Point) -> Fraction:
        """Exact distance from p to the nearest window side."""
        return min(p.x - self.xmin, self.xmax - p.x,
                   p.y - self.ymin, self.ymax - p.y)


def window(xmin: ScalarLike, ymin: ScalarLike,
           xmax: ScalarLike, ymax: ScalarLike) -> Window:
    return Window(scalar(xmin), scalar(ymin), scalar(xmax), scalar(ymax))


@dataclass(frozen=True)
class Configuration:
    points: tuple[Point, ...]
    window: Window


@dataclass(frozen=True)
class Witness:
    """A free spot: a window point with distance >= 2 from every center.

    clearance_squared is None for the empty configuration (nothing bounds the
    clearance there).
    """

    location: Point
    clearance_squared: Optional[Fraction]


def validate(points: Sequence[Point], win: Window) -> Configuration:
    """Check the configuration invariants and return the Configuration.

    Raises OutOfWindow for the first point outside the closed window and
    PairTooClose (with the offending indices and the exact squared distance)
    for the first pair closer than 2.  Distance exactly 2 is allowed.
    """
    pts = tuple(points)
    for i, p in enumerate(pts):
        if not win.contains(p):
            raise OutOfWindow(i, p)
    cells: dict[tuple[int, int], list[int]] = {}
    for j, p in enumerate(pts):
        cx = math.floor((p.x - win.xmin) / 2)
        cy = math.floor((p.y - win.ymin) / 2)
        neighbors: list[int] = []
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                neighbors.extend(cells.get((cx + dx, cy + dy), ()))
        for i in sorted(neighbors):
            d2 = distance_squared(pts[i], p)
            if d2 < _FOUR:
                raise PairTooClose(i, j, d2)
        cells.setdefault((cx, cy), []).append(j)
    return Configuration(pts, win)


def min_pairwise_distance_squared(config: Configuration) -> Optional[Fraction]:
    """Exact minimum pairwise squared distance (None for < 2 points).

    The closest pair of a point set is joined by a Delaunay edge, so for
    non-degenerate configurations only those pairs are examined.
    """
    pts = config.points
    if len(pts) < 2:
        return None
    try:
        engine = _Engine(pts)
    except (TooFewPoints, AllCollinear):
        return min(distance_squared(pts[i], pts[j])
                   for i in range(len(pts)) for j in range(i + 1, len(pts)))
    best: Optional[Fraction] = None
    for t in engine.solid_indices():
        verts = engine.tv[t]
        for i in range(3):
            d2 = distance_squared(pts[verts[i]], pts[verts[(i + 1) % 3]])
            if best is None or d2 < best:
                best = d2
    return best


# -- candidate machinery ------------------------------------------------------


def _boundary_crossings(out, site: Point, cx, cy, rx, ry,
                        fcx: float, fcy: float, frx: float, fry: float,
                        win: Window, fwin, seg: bool) -> None:
    """Append clearance candidates where P + t*r crosses the window boundary
    (t in [0, 1] for Voronoi segments, t >= 0 for the unbounded rays).

    The window sides are axis-aligned, so each crossing is a single exact
    division; floats pre-screen the parameter range and exact arithmetic
    confirms anything within the band.  Crossings whose clearance is
    certainly below 4 are dropped early: they can neither be witnesses nor
    affect the witness maximum.  ``site`` is one of the two sites the
    crossing is equidistant from, which is its clearance by Voronoi duality.
    """
    fxmin, fymin, fxmax, fymax = fwin
    fsx, fsy = float(site.x), float(site.y)
    if rx != 0:
        for bx, fbx in ((win.xmin, fxmin), (win.xmax, fxmax)):
            if frx != 0.0:
                t_f = (fbx - fcx) / frx
                if math.isfinite(t_f):
                    if t_f < -_FLOAT_BAND or (seg and t_f > 1 + _FLOAT_BAND):
                        continue
                    y_f = fcy + t_f * fry
                    if math.isfinite(y_f):
                        if not (fymin - _FLOAT_BAND <= y_f
                                <= fymax + _FLOAT_BAND):
                            continue
                        d2_f = (fbx - fsx) ** 2 + (y_f - fsy) ** 2
                        if d2_f < 4.0 - 1e-3:
                            continue
            t = (bx - cx) / rx
            if t < 0 or (seg and t > 1):
                continue
            y = cy + t * ry
            if win.ymin <= y <= win.ymax:
                dx = bx - site.x
                dy = y - site.y
                d2 = dx * dx + dy * dy
                out.append((float(d2), (d2, bx, y)))
    if ry != 0:
        for by, fby in ((win.ymin, fymin), (win.ymax, fymax)):
            if fry != 0.0:
                t_f = (fby - fcy) / fry
                if math.isfinite(t_f):
                    if t_f < -_FLOAT_BAND or (seg and t_f > 1 + _FLOAT_BAND):
                        continue
                    x_f = fcx + t_f * frx
                    if math.isfinite(x_f):
                        if not (fxmin - _FLOAT_BAND <= x_f
                                <= fxmax + _FLOAT_BAND):
                            continue
                        d2_f = (x_f - fsx) ** 2 + (fby - fsy) ** 2
                        if d2_f < 4.0 - 1e-3:
                            continue
            t = (by - cy) / ry
            if t < 0 or (seg and t > 1):
                continue
            x = cx + t * rx
            if win.xmin <= x <= win.xmax:
                dx = x - site.x
                dy = by - site.y
                d2 = dx * dx + dy * dy
                out.append((float(d2), (d2, x, by)))


def _corner_clearance(corner: Point, pts: Sequence[Point],
                      xf: Sequence[float], yf: Sequence[float]) -> Fraction:
    fx, fy = float(corner.x), float(corner.y)
    best_f = math.inf
    for x, y in zip(xf, yf):
        d = (x - fx) * (x - fx) + (y - fy) * (y - fy)
        if d < best_f:
            best_f = d
    best: Optional[Fraction] = None
    for i, (x, y) in enumerate(zip(xf, yf)):
        d = (x - fx) * (x - fx) + (y - fy) * (y - fy)
        if d <= best_f + _FLOAT_BAND:
            d2 = distance_squared(corner, pts[i])
            if best is None or d2 < best:
                best = d2
    return best


def _candidates(engine: _Engine, win: Window):
    """All max-clearance candidates: (float clearance, exact data) pairs.

    Exact data is (clearance_squared, x, y); the float is only for screening.
    Candidates are the Delaunay circumcenters inside the window, the window
    boundary crossings of the Voronoi edges, and the four corners.
    """
    out = []
    fwin = (float(win.xmin), float(win.ymin), float(win.xmax), float(win.ymax))
    fxmin, fymin, fxmax, fymax = fwin
    pts = engine.exact

    for t in engine.solid_indices():
        cx, cy, r2, fx, fy, fr2 = engine.circumdata(t)
        if fr2 >= 4.0 - 1e-3:  # below that it cannot matter to the witness
            inside = (fxmin + _FLOAT_BAND < fx < fxmax - _FLOAT_BAND
                      and fymin + _FLOAT_BAND < fy < fymax - _FLOAT_BAND)
            if not inside:
                near = (fxmin - _FLOAT_BAND <= fx <= fxmax + _FLOAT_BAND
                        and fymin - _FLOAT_BAND <= fy <= fymax + _FLOAT_BAND)
                inside = near and (win.xmin <= cx <= win.xmax
                                   and win.ymin <= cy <= win.ymax)
            if inside:
                out.append((fr2, (r2, cx, cy)))

        verts = engine.tv[t]
        for i in range(3):
            n = engine.tn[t][i]
            u = verts[(i + 1) % 3]
            v = verts[(i + 2) % 3]
            site = pts[u]
            if engine.tv[n][2] == GHOST:
                # unbounded Voronoi edge: ray outward from the circumcenter
                xi, yi = engine.xi, engine.yi
                w = verts[i]
                rx = -(yi[v] - yi[u])
                ry = xi[v] - xi[u]
                inward = (rx * (xi[u] + xi[v] - 2 * xi[w])
                          + ry * (yi[u] + yi[v] - 2 * yi[w]))
                if inward < 0:
                    rx, ry = -rx, -ry
                # normalize the float direction so the parameter screen works
                # on a sane scale (the exact ints live on the scaled grid)
                m = max(abs(float(rx)), abs(float(ry))) or 1.0
                _boundary_crossings(out, site, cx, cy, rx, ry,
                                    fx, fy, float(rx) / m, float(ry) / m,
                                    win, fwin, seg=False)
            elif n > t:
                # bounded Voronoi edge: segment between the two circumcenters
                ox, oy, _or2, gx, gy, _gr2 = engine.circumdata(n)
                if (fxmin + _FLOAT_BAND < fx < fxmax - _FLOAT_BAND
                        and fymin + _FLOAT_BAND < fy < fymax - _FLOAT_BAND
                        and fxmin + _FLOAT_BAND < gx < fxmax - _FLOAT_BAND
                        and fymin + _FLOAT_BAND < gy < fymax - _FLOAT_BAND):
                    continue  # both endpoints safely interior: no crossing
                _boundary_crossings(out, site, cx, cy, ox - cx, oy - cy,
                                    fx, fy, gx - fx, gy - fy,
                                    win, fwin, seg=True)

    for corner in win.corners():
        d2 = _corner_clearance(corner, pts, engine.xf, engine.yf)
        out.append((float(d2), (d2, corner.x, corner.y)))
    return out


def _best_exact(cands) -> Optional[tuple[Fraction, Fraction, Fraction]]:
    """Exact max-clearance candidate with clearance >= 4, ties broken by
    smallest (x, y); None when every candidate is certainly below 4.

    Only candidates whose float clearance sits within the screening band of
    the float maximum need exact comparison: float(Fraction) is correctly
    rounded, so anything below the band is exactly smaller as well.
    """
    if not cands:
        return None
    fmax = max(f for f, _ in cands)
    if fmax < 4.0 - _FLOAT_BAND:
        return None
    cut = max(4.0 - _FLOAT_BAND, fmax - _FLOAT_BAND)
    best: Optional[tuple[Fraction, Fraction, Fraction]] = None
    for f, (d2, x, y) in cands:
        if f < cut or d2 < _FOUR:
            continue
        if best is None:
            best = (d2, x, y)
            continue
        if d2 > best[0] or (d2 == best[0] and (x, y) < (best[1], best[2])):
            best = (d2, x, y)
    return best


def _grid_witness(pts: Sequence[Point], win: Window
                  ) -> Optional[tuple[Fraction, Fraction, Fraction]]:
    """Fallback for degenerate (< 3 or collinear) configurations: corners
    evaluated exactly plus a 1/8-pitch grid scan."""
    cands: list[tuple[float, tuple[Fraction, Fraction, Fraction]]] = []
    xf = [float(p.x) for p in pts]
    yf = [float(p.y) for p in pts]
    for corner in win.corners():
        d2 = _corner_clearance(corner, pts, xf, yf)
        cands.append((float(d2), (d2, corner.x, corner.y)))

    pitch = Fraction(1, 8)
    nx = int((win.xmax - win.xmin) / pitch) + 1
    ny = int((win.ymax - win.ymin) / pitch) + 1
    gx = float(win.xmin) + np.arange(nx) * float(pitch)
    gy = float(win.ymin) + np.arange(ny) * float(pitch)
    mx, my = np.meshgrid(gx, gy, indexing="ij")
    clear = np.full(mx.shape, np.inf)
    for x, y in zip(xf, yf):
        np.minimum(clear, (mx - x) ** 2 + (my - y) ** 2, out=clear)
    flat = clear.ravel()
    fmax = flat.max()
    threshold = max(4.0 - _FLOAT_BAND, fmax - _FLOAT_BAND)
    for pos in np.nonzero(flat >= threshold)[0].tolist():
        ix, iy = divmod(pos, my.shape[1])
        x = win.xmin + ix * pitch
        y = win.ymin + iy * pitch
        p = Point(x, y)
        d2 = min((distance_squared(p, q) for q in pts), default=None)
        if d2 is None:
            continue
        cands.append((float(d2), (d2, x, y)))
    return _best_exact(cands)


def find_witness(config: Configuration) -> Optional[Witness]:
    """Max-clearance free spot, or None when the window is saturated.

    The witness is the exact maximum-clearance candidate, ties broken by the
    lexicographically smallest (x, y).
    """
    pts = config.points
    win = config.window
    if not pts:
        return Witness(Point(win.xmin, win.ymin), None)
    try:
        engine = _Engine(pts)
    except (TooFewPoints, AllCollinear):
        best = _grid_witness(pts, win)
        if best is None:
            return None
        return Witness(Point(best[1], best[2]), best[0])
    best = _best_exact(_candidates(engine, win))
    if best is None:
        return None
    return Witness(Point(best[1], best[2]), best[0])


def is_saturated(config: Configuration) -> bool:
    """True iff no unit circle fits anywhere in the window."""
    return find_witness(config) is None


def _clearance_at_least_four(xs: np.ndarray, ys: np.ndarray,
                             pts: Sequence[Point], x: Fraction, y: Fraction
                             ) -> bool:
    fx, fy = float(x), float(y)
    d2 = (xs - fx) ** 2 + (ys - fy) ** 2
    p = Point(x, y)
    for i in np.nonzero(d2 < 4.0 + _FLOAT_BAND)[0].tolist():
        if distance_squared(p, pts[i]) < _FOUR:
            return False
    return True


def _snap_witness(engine: _Engine, win: Window,
                  x: Fraction, y: Fraction, clearance: Fraction) -> Point:
    """Round an insertion spot to the coarsest binary grid that keeps exact
    clearance >= 2, falling back to the exact spot.

    Witness locations are circumcenters and boundary crossings, rational
    functions of the existing points; inserting them verbatim compounds
    denominators exponentially across insertion chains.  Snapping (with exact
    re-verification) keeps coordinates bounded without weakening any
    invariant: the inserted point still clears 2 exactly.
    """
    xs = np.asarray(engine.xf)
    ys = np.asarray(engine.yf)
    pts = engine.exact
    slack = math.sqrt(float(clearance)) - 2.0
    if slack > 0:
        k0 = max(0, math.ceil(math.log2(math.sqrt(2.0) / slack)) + 1)
    else:
        k0 = 56
    for k in range(k0, k0 + 8):
        grid = 1 << k
        sx, sy = win.clamp(Fraction(round(x * grid), grid),
                           Fraction(round(y * grid), grid))
        if _clearance_at_least_four(xs, ys, pts, sx, sy):
            return Point(sx, sy)
    return Point(x, y)


def _saturate_engine(config: Configuration
                     ) -> tuple[Configuration, Optional[_Engine], int]:
    """Insert free spots until the window is saturated.

    Returns the saturated configuration, the live triangulation engine (None
    only for degenerate outputs, which cannot occur for windows >= 4x4), and
    the number of insertions.  Original points keep their positions and order;
    insertions are appended in insertion order.
    """
    win = config.window
    pts = list(config.points)
    cap = int((float(win.width) + 2.0) * (float(win.height) + 2.0)
              / math.pi) + 16
    inserted = 0

    engine: Optional[_Engine] = None
    while engine is None:
        try:
            engine = _Engine(pts)
        except (TooFewPoints, AllCollinear):
            if pts:
                best = _grid_witness(pts, win)
                if best is None:  # pragma: no cover - see module docstring
                    return Configuration(tuple(pts), win), None, inserted
                spot = Point(best[1], best[2])
            else:
                spot = Point(win.xmin, win.ymin)
            pts.append(spot)
            inserted += 1
            if len(pts) > cap:  # pragma: no cover - packing bound
                raise RuntimeError("saturation failed to terminate")

    while True:
        best = _best_exact(_candidates(engine, win))
        if best is None:
            break
        spot = _snap_witness(engine, win, best[1], best[2], best[0])
        engine.insert_point(spot)
        pts.append(spot)
        inserted += 1
        if len(pts) > cap:  # pragma: no cover - packing bound
            raise RuntimeError("saturation failed to terminate")
    return Configuration(tuple(pts), win), engine, inserted


def saturate(config: Configuration) -> Configuration:
    """Grow the configuration until no unit circle fits in the window.

    Never moves or removes points; the result contains the input points first
    (in their original order) followed by the inserted ones in insertion
    order.  Terminates because every inserted point carries a unit disk
    disjoint from all others inside the grown window.
    """
    result, _engine, _count = _saturate_engine(config)
    return result
