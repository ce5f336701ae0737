"""Delaunay triangulation with exact predicates, plus independent verification.

Construction is incremental insertion (cavity carving).  The convex hull is
bordered by "ghost" triangles sharing a symbolic vertex at infinity, so every
edge always has a neighbor and points outside the hull are handled by the same
cavity machinery as interior ones.  All predicate decisions are exact; floats
only pre-screen.

Cocircular point sets admit several Delaunay triangulations.  After
construction, exactly cocircular quadrilaterals are re-diagonalized so the
diagonal touching the lowest vertex index wins, which makes the output
canonical and reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .geometry import (
    Point,
    Sign,
    incircle_det,
    incircle_sign,
    orient2d,
    orient_det,
    orient_sign,
)

GHOST = -1

_CHUNK = 256  # triangle rows per vectorized verification block


class TriangulationError(Exception):
    """Base class for triangulation errors."""


class TooFewPoints(TriangulationError):
    pass


class DuplicatePoint(TriangulationError):
    def __init__(self, first: int, second: int, location: Point):
        self.first = first
        self.second = second
        self.location = location
        super().__init__(f"points {first} and {second} coincide at "
                         f"({location.x}, {location.y})")


class AllCollinear(TriangulationError):
    pass


class StructureError(TriangulationError):
    pass


class Triangle(NamedTuple):
    v0: int
    v1: int
    v2: int


@dataclass(frozen=True)
class Triangulation:
    """Immutable triangulation: vertices, counterclockwise triangles, and
    per-triangle neighbors (None marks a hull edge)."""

    points: tuple[Point, ...]
    triangles: tuple[Triangle, ...]
    adjacency: tuple[tuple[Optional[int], Optional[int], Optional[int]], ...]

    @classmethod
    def from_triangles(cls, points: Sequence[Point],
                       triangles: Sequence[tuple[int, int, int]]
                       ) -> "Triangulation":
        """Build a triangulation from raw index triples (for hand-built
        inputs).  Triangles are normalized to counterclockwise order and the
        edge structure must be manifold."""
        pts = tuple(points)
        tris = []
        for a, b, c in triangles:
            if len({a, b, c}) != 3:
                raise StructureError(f"repeated vertex in triangle {(a, b, c)}")
            if not all(0 <= v < len(pts) for v in (a, b, c)):
                raise StructureError(f"vertex index out of range in {(a, b, c)}")
            s = orient2d(pts[a], pts[b], pts[c])
            if s is Sign.ZERO:
                raise StructureError(f"degenerate triangle {(a, b, c)}")
            tris.append(Triangle(a, b, c) if s is Sign.POSITIVE
                        else Triangle(a, c, b))
        adjacency = _adjacency_from_edges(tris)
        return cls(pts, tuple(tris), adjacency)


@dataclass(frozen=True)
class VerificationResult:
    """Outcome of the brute-force empty-circumcircle check."""

    ok: bool
    triangle_index: Optional[int] = None
    point_index: Optional[int] = None


def _adjacency_from_edges(tris: Sequence[Triangle]):
    edge_map: dict[tuple[int, int], int] = {}
    for idx, t in enumerate(tris):
        for i in range(3):
            e = (t[(i + 1) % 3], t[(i + 2) % 3])
            if e in edge_map:
                raise StructureError(f"edge {e} used twice")
            edge_map[e] = idx
    adjacency = []
    for t in tris:
        row = []
        for i in range(3):
            e = (t[(i + 2) % 3], t[(i + 1) % 3])
            row.append(edge_map.get(e))
        adjacency.append(tuple(row))
    return tuple(adjacency)


class _Engine:
    """Incremental Delaunay triangulation over exact rational points.

    Coordinates are stored twice: as integers on a common-denominator grid
    (the exact representation every predicate falls back to) and as doubles
    for the float pre-screen.  Points may be appended after construction,
    which is how saturation grows a configuration without re-triangulating.
    """

    def __init__(self, points: Sequence[Point]):
        self.exact: list[Point] = []
        self.scale = 1
        self.xi: list[int] = []
        self.yi: list[int] = []
        self.xf: list[float] = []
        self.yf: list[float] = []
        self.index_of: dict[tuple[Fraction, Fraction], int] = {}

        self.tv: list[Optional[list[int]]] = []   # vertex triples; GHOST last
        self.tn: list[Optional[list[int]]] = []   # neighbor triples
        self.circum: list = []                    # cached circumcircle data
        self.free: list[int] = []
        self.hint = 0

        pts = list(points)
        if len(pts) < 3:
            raise TooFewPoints(f"need at least 3 points, got {len(pts)}")
        denom = 1
        for p in pts:
            denom = (denom * p.x.denominator
                     // math.gcd(denom, p.x.denominator))
            denom = (denom * p.y.denominator
                     // math.gcd(denom, p.y.denominator))
        self.scale = denom
        for i, p in enumerate(pts):
            key = (p.x, p.y)
            if key in self.index_of:
                raise DuplicatePoint(self.index_of[key], i, p)
            self._append_coords(p)

        i2 = self._initial_triple()
        order = [i for i in range(len(pts)) if i not in (0, 1, i2)]
        for j in order:
            seed = self._locate(j)
            self._carve(j, seed)

    # -- point bookkeeping -------------------------------------------------

    def _append_coords(self, p: Point) -> int:
        idx = len(self.exact)
        self.exact.append(p)
        self.index_of[(p.x, p.y)] = idx
        d = (p.x.denominator * p.y.denominator
             // math.gcd(p.x.denominator, p.y.denominator))
        if self.scale % d:
            new_scale = self.scale * d // math.gcd(self.scale, d)
            factor = new_scale // self.scale
            self.xi = [v * factor for v in self.xi]
            self.yi = [v * factor for v in self.yi]
            self.scale = new_scale
        self.xi.append(p.x.numerator * (self.scale // p.x.denominator))
        self.yi.append(p.y.numerator * (self.scale // p.y.denominator))
        self.xf.append(float(p.x))
        self.yf.append(float(p.y))
        return idx

    def _initial_triple(self) -> int:
        if (self.xi[0], self.yi[0]) == (self.xi[1], self.yi[1]):
            raise DuplicatePoint(0, 1, self.exact[0])  # pragma: no cover
        i2 = -1
        for k in range(2, len(self.exact)):
            if self._orient(0, 1, k) != 0:
                i2 = k
                break
        if i2 < 0:
            raise AllCollinear("all points lie on one straight line")
        v0, v1, v2 = 0, 1, i2
        if self._orient(v0, v1, v2) < 0:
            v1, v2 = v2, v1
        solid = self._alloc([v0, v1, v2])
        g01 = self._alloc([v1, v0, GHOST])
        g12 = self._alloc([v2, v1, GHOST])
        g20 = self._alloc([v0, v2, GHOST])
        self._wire([solid, g01, g12, g20], {})
        self.hint = solid
        return i2

    # -- exact-with-filter predicates on stored vertices -------------------

    def _orient(self, a: int, b: int, p: int) -> int:
        xi, yi, xf, yf = self.xi, self.yi, self.xf, self.yf
        return orient_sign(xi[a], yi[a], xi[b], yi[b], xi[p], yi[p],
                           xf[a], yf[a], xf[b], yf[b], xf[p], yf[p])

    def _incircle(self, a: int, b: int, c: int, p: int) -> int:
        xi, yi, xf, yf = self.xi, self.yi, self.xf, self.yf
        return incircle_sign(
            xi[a], yi[a], xi[b], yi[b], xi[c], yi[c], xi[p], yi[p],
            xf[a], yf[a], xf[b], yf[b], xf[c], yf[c], xf[p], yf[p])

    def _in_disk(self, t: int, p: int) -> bool:
        verts = self.tv[t]
        if verts[2] == GHOST:
            b, a = verts[0], verts[1]       # hull edge runs a -> b
            s = self._orient(b, a, p)
            if s != 0:
                return s > 0
            xi, yi = self.xi, self.yi
            ax, ay, bx, by = xi[a], yi[a], xi[b], yi[b]
            px, py = xi[p], yi[p]
            if (px - ax) * (bx - ax) + (py - ay) * (by - ay) <= 0:
                return False
            return (px - bx) * (ax - bx) + (py - by) * (ay - by) > 0
        a, b, c = verts
        return self._incircle(a, b, c, p) > 0

    # -- triangle slots -----------------------------------------------------

    def _alloc(self, verts: list[int]) -> int:
        if self.free:
            idx = self.free.pop()
            self.tv[idx] = verts
            self.tn[idx] = [-2, -2, -2]
            self.circum[idx] = None
            return idx
        self.tv.append(verts)
        self.tn.append([-2, -2, -2])
        self.circum.append(None)
        return len(self.tv) - 1

    def _release(self, idx: int) -> None:
        self.tv[idx] = None
        self.tn[idx] = None
        self.circum[idx] = None
        self.free.append(idx)

    def _wire(self, new_ids: list[int],
              boundary: dict[tuple[int, int], int]) -> None:
        edge_map: dict[tuple[int, int], tuple[int, int]] = {}
        for nt in new_ids:
            verts = self.tv[nt]
            for i in range(3):
                edge_map[(verts[(i + 1) % 3], verts[(i + 2) % 3])] = (nt, i)
        for nt in new_ids:
            verts = self.tv[nt]
            for i in range(3):
                e = (verts[(i + 1) % 3], verts[(i + 2) % 3])
                rev = (e[1], e[0])
                if rev in edge_map:
                    self.tn[nt][i] = edge_map[rev][0]
                elif e in boundary:
                    outside = boundary[e]
                    self.tn[nt][i] = outside
                    overts = self.tv[outside]
                    for k in range(3):
                        if (overts[(k + 1) % 3], overts[(k + 2) % 3]) == rev:
                            self.tn[outside][k] = nt
                            break
                    else:  # pragma: no cover - wiring invariant
                        raise AssertionError("cavity boundary mismatch")

    # -- insertion ----------------------------------------------------------

    def _locate(self, p: int) -> int:
        t = self.hint
        if self.tv[t] is None:
            t = next(i for i, v in enumerate(self.tv)
                     if v is not None and v[2] != GHOST)
        elif self.tv[t][2] == GHOST:
            t = self.tn[t][2]
        prev = -1
        for _ in range(2 * len(self.tv) + 32):
            verts = self.tv[t]
            nxt = -1
            for i in range(3):
                n = self.tn[t][i]
                if n == prev:
                    continue
                if self._orient(verts[(i + 1) % 3], verts[(i + 2) % 3], p) < 0:
                    nxt = n
                    break
            if nxt < 0:
                return t
            if self.tv[nxt][2] == GHOST:
                return nxt
            prev, t = t, nxt
        for idx, verts in enumerate(self.tv):  # pragma: no cover - fallback
            if verts is not None and self._in_disk(idx, p):
                return idx
        raise AssertionError("point location failed")  # pragma: no cover

    def _carve(self, p: int, seed: int) -> None:
        cavity = {seed: True}
        rejected: set[int] = set()
        stack = [seed]
        boundary_edges: list[tuple[int, int, int]] = []
        while stack:
            t = stack.pop()
            verts = self.tv[t]
            for i in range(3):
                n = self.tn[t][i]
                if n in cavity:
                    continue
                u = verts[(i + 1) % 3]
                v = verts[(i + 2) % 3]
                if n not in rejected and self._in_disk(n, p):
                    cavity[n] = True
                    stack.append(n)
                else:
                    rejected.add(n)
                    boundary_edges.append((u, v, n))

        boundary = {(u, v): outside for u, v, outside in boundary_edges}
        for t in cavity:
            self._release(t)
        new_ids = []
        for u, v, _outside in boundary_edges:
            if v == GHOST:
                verts = [p, u, GHOST]
            elif u == GHOST:
                verts = [v, p, GHOST]
            else:
                verts = [u, v, p]
            new_ids.append(self._alloc(verts))
        self._wire(new_ids, boundary)
        for nt in new_ids:
            if self.tv[nt][2] != GHOST:
                self.hint = nt
                break

    def insert_point(self, p: Point) -> int:
        """Insert one more point into the live triangulation."""
        key = (p.x, p.y)
        if key in self.index_of:
            raise DuplicatePoint(self.index_of[key], len(self.exact), p)
        j = self._append_coords(p)
        seed = self._locate(j)
        self._carve(j, seed)
        return j

    # -- derived data ---------------------------------------------------------

    def solid_indices(self) -> list[int]:
        return [i for i, v in enumerate(self.tv)
                if v is not None and v[2] != GHOST]

    def circumdata(self, t: int):
        """Exact circumcircle of solid triangle t: (cx, cy, r2, fx, fy, fr2).

        Fractions first, float mirrors last; cached per slot.
        """
        cached = self.circum[t]
        if cached is not None:
            return cached
        a, b, c = self.tv[t]
        xi, yi = self.xi, self.yi
        ax, ay, bx, by, cx_, cy_ = xi[a], yi[a], xi[b], yi[b], xi[c], yi[c]
        d2 = 2 * ((bx - ax) * (cy_ - ay) - (by - ay) * (cx_ - ax))
        la = ax * ax + ay * ay
        lb = bx * bx + by * by
        lc = cx_ * cx_ + cy_ * cy_
        ux = la * (by - cy_) + lb * (cy_ - ay) + lc * (ay - by)
        uy = la * (cx_ - bx) + lb * (ax - cx_) + lc * (bx - ax)
        denom = d2 * self.scale
        px = Fraction(ux, denom)
        py = Fraction(uy, denom)
        r2 = Fraction((ax * d2 - ux) ** 2 + (ay * d2 - uy) ** 2,
                      d2 * d2 * self.scale * self.scale)
        data = (px, py, r2, float(px), float(py), float(r2))
        self.circum[t] = data
        return data

    # -- cocircular canonicalization ------------------------------------------

    def canonical_flips(self) -> None:
        """Re-diagonalize exactly cocircular quads so the diagonal containing
        the lowest vertex index is kept.  Leaves the Delaunay property intact
        (both diagonals of a cocircular quad are valid)."""
        work = sorted(self.solid_indices(), reverse=True)
        guard = 64 * len(self.tv) + 1024
        while work and guard:
            guard -= 1
            t = work.pop()
            if self.tv[t] is None or self.tv[t][2] == GHOST:
                continue
            for i in range(3):
                n = self.tn[t][i]
                if self.tv[n][2] == GHOST:
                    continue
                slot_n = self.tn[n].index(t)
                u = self.tv[t][(i + 1) % 3]
                v = self.tv[t][(i + 2) % 3]
                w = self.tv[t][i]
                x = self.tv[n][slot_n]
                if min(w, x) >= min(u, v):
                    continue
                a, b, c = self.tv[t]
                if self._incircle(a, b, c, x) == 0:
                    self._flip(t, i)
                    work.extend((t, n))
                    work.extend(m for m in self.tn[t] + self.tn[n]
                                if self.tv[m] is not None
                                and self.tv[m][2] != GHOST)
                    break

    def _flip(self, t: int, i: int) -> None:
        n = self.tn[t][i]
        slot_n = self.tn[n].index(t)
        apex_t = self.tv[t][i]
        e1 = self.tv[t][(i + 1) % 3]
        e2 = self.tv[t][(i + 2) % 3]
        apex_n = self.tv[n][slot_n]
        nb_a = self.tn[t][(i + 1) % 3]     # across (e2, apex_t)
        nb_b = self.tn[t][(i + 2) % 3]     # across (apex_t, e1)
        nb_c = self.tn[n][(slot_n + 1) % 3]  # across (e1, apex_n)
        nb_d = self.tn[n][(slot_n + 2) % 3]  # across (apex_n, e2)
        self.tv[t] = [apex_t, e1, apex_n]
        self.tn[t] = [nb_c, n, nb_b]
        self.tv[n] = [apex_n, e2, apex_t]
        self.tn[n] = [nb_a, t, nb_d]
        self.tn[nb_a][self.tn[nb_a].index(t)] = n
        self.tn[nb_c][self.tn[nb_c].index(n)] = t
        self.circum[t] = None
        self.circum[n] = None

    # -- export ---------------------------------------------------------------

    def to_triangulation(self) -> Triangulation:
        tris = []
        for idx in self.solid_indices():
            a, b, c = self.tv[idx]
            m = min(a, b, c)
            if m == a:
                tris.append(Triangle(a, b, c))
            elif m == b:
                tris.append(Triangle(b, c, a))
            else:
                tris.append(Triangle(c, a, b))
        tris.sort()
        return Triangulation(tuple(self.exact), tuple(tris),
                             _adjacency_from_edges(tris))


def delaunay(points: Sequence[Point]) -> Triangulation:
    """Delaunay triangulation of the given points.

    No input point ends up strictly inside any triangle's circumcircle;
    cocircular quads are diagonalized canonically.  Deterministic for a given
    input ordering.

    Raises TooFewPoints, DuplicatePoint, or AllCollinear on degenerate input.
    """
    engine = _Engine(points)
    engine.canonical_flips()
    return engine.to_triangulation()


def verify_delaunay(t: Triangulation) -> VerificationResult:
    """Brute-force empty-circumcircle check, independent of construction.

    Every (triangle, point) pair is screened with a vectorized float
    determinant plus a conservative error bound; undecided pairs are settled
    in exact arithmetic.  Returns the first violating pair if any.
    """
    n = len(t.points)
    xs = np.array([float(p.x) for p in t.points])
    ys = np.array([float(p.y) for p in t.points])
    tris = np.array(t.triangles, dtype=np.int64).reshape(-1, 3)
    bound = (10.0 + 96.0 * 2.0 ** -53) * 2.0 ** -53

    for start in range(0, len(tris), _CHUNK):
        block = tris[start:start + _CHUNK]
        rows = len(block)
        ax = xs[block[:, 0]][:, None]
        ay = ys[block[:, 0]][:, None]
        bx = xs[block[:, 1]][:, None]
        by = ys[block[:, 1]][:, None]
        cx = xs[block[:, 2]][:, None]
        cy = ys[block[:, 2]][:, None]
        adx = ax - xs[None, :]
        ady = ay - ys[None, :]
        bdx = bx - xs[None, :]
        bdy = by - ys[None, :]
        cdx = cx - xs[None, :]
        cdy = cy - ys[None, :]
        bdxcdy = bdx * cdy
        cdxbdy = cdx * bdy
        cdxady = cdx * ady
        adxcdy = adx * cdy
        adxbdy = adx * bdy
        bdxady = bdx * ady
        alift = adx * adx + ady * ady
        blift = bdx * bdx + bdy * bdy
        clift = cdx * cdx + cdy * cdy
        det = (alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy)
               + clift * (adxbdy - bdxady))
        permanent = ((np.abs(bdxcdy) + np.abs(cdxbdy)) * alift
                     + (np.abs(cdxady) + np.abs(adxcdy)) * blift
                     + (np.abs(adxbdy) + np.abs(bdxady)) * clift)
        err = bound * permanent
        row_ids = np.arange(rows)[:, None]
        for k in range(3):
            det[row_ids[:, 0], block[:, k]] = -1.0
            err[row_ids[:, 0], block[:, k]] = 0.0
        inside = det > err
        unsure = np.abs(det) <= err

        for r in range(rows):
            cols = []
            if inside[r].any():
                cols.extend(np.nonzero(inside[r])[0].tolist())
            if unsure[r].any():
                ti = start + r
                tri = t.triangles[ti]
                pa, pb, pc = (t.points[tri.v0], t.points[tri.v1],
                              t.points[tri.v2])
                for d in np.nonzero(unsure[r])[0].tolist():
                    if d in tri:
                        continue
                    pd = t.points[d]
                    exact = incircle_det(pa.x, pa.y, pb.x, pb.y,
                                         pc.x, pc.y, pd.x, pd.y)
                    if exact > 0:
                        cols.append(d)
            if cols:
                return VerificationResult(False, start + r, min(cols))
    return VerificationResult(True)


def convex_hull(points: Sequence[Point]) -> list[int]:
    """Indices of the convex hull in counterclockwise order (strict corners
    only), by monotone chain with exact orientation tests."""
    order = sorted(range(len(points)), key=lambda i: (points[i].x, points[i].y))
    if len(order) == 1:
        return order

    def build(idx_iter):
        chain: list[int] = []
        for i in idx_iter:
            while len(chain) >= 2 and orient2d(points[chain[-2]],
                                               points[chain[-1]],
                                               points[i]) is not Sign.POSITIVE:
                chain.pop()
            chain.append(i)
        return chain

    lower = build(order)
    upper = build(reversed(order))
    return lower[:-1] + upper[:-1]


def hull_shoelace_area(points: Sequence[Point]) -> Fraction:
    """Exact area of the convex hull via the shoelace formula (an oracle
    independent of any triangulation)."""
    hull = convex_hull(points)
    if len(hull) < 3:
        return Fraction(0)
    total = Fraction(0)
    for k in range(len(hull)):
        p = points[hull[k]]
        q = points[hull[(k + 1) % len(hull)]]
        total += p.x * q.y - q.x * p.y
    return abs(total) / 2


def convex_hull_area(t: Triangulation) -> Fraction:
    """Exact hull area as the sum of triangle areas."""
    total = Fraction(0)
    for tri in t.triangles:
        a, b, c = t.points[tri.v0], t.points[tri.v1], t.points[tri.v2]
        total += orient_det(a.x, a.y, b.x, b.y, c.x, c.y)
    return total / 2


def validate_structure(t: Triangulation) -> None:
    """Check the structural triangulation invariants, raising StructureError:
    counterclockwise triangles, manifold edges, symmetric adjacency, every
    point used, and exact area partition of the convex hull."""
    n = len(t.points)
    edge_map: dict[tuple[int, int], int] = {}
    used = set()
    for idx, tri in enumerate(t.triangles):
        if len(set(tri)) != 3:
            raise StructureError(f"triangle {idx} repeats a vertex")
        if not all(0 <= v < n for v in tri):
            raise StructureError(f"triangle {idx} index out of range")
        a, b, c = (t.points[v] for v in tri)
        if orient2d(a, b, c) is not Sign.POSITIVE:
            raise StructureError(f"triangle {idx} is not counterclockwise")
        used.update(tri)
        for i in range(3):
            e = (tri[(i + 1) % 3], tri[(i + 2) % 3])
            if e in edge_map:
                raise StructureError(f"directed edge {e} used twice")
            edge_map[e] = idx
    if used != set(range(n)):
        raise StructureError("some points are not triangulation vertices")
    for idx, tri in enumerate(t.triangles):
        for i in range(3):
            e = (tri[(i + 2) % 3], tri[(i + 1) % 3])
            if t.adjacency[idx][i] != edge_map.get(e):
                raise StructureError(
                    f"adjacency of triangle {idx} is inconsistent")
    if convex_hull_area(t) != hull_shoelace_area(t.points):
        raise StructureError("triangle areas do not partition the hull")


def triangulation_edges(t: Triangulation) -> list[tuple[int, int]]:
    """Sorted list of undirected edges (i < j)."""
    edges = set()
    for tri in t.triangles:
        for i in range(3):
            u, v = tri[(i + 1) % 3], tri[(i + 2) % 3]
            edges.add((u, v) if u < v else (v, u))
    return sorted(edges)
