"""Density analysis: per-triangle stats, the two bound checks, aggregation,
and the Monte-Carlo wedge identity."""

import math
from fractions import Fraction as F

import mpmath
import pytest

from packdens import (
    Circumcircle,
    DENSITY_TOLERANCE,
    EmptyTriangulation,
    GeneratorSpec,
    Kind,
    PACKING_BOUND,
    Point,
    Triangle,
    TriangleStats,
    aggregate,
    all_triangle_stats,
    check_lemma1,
    check_lemma2,
    delaunay,
    interior_triangle_indices,
    point,
    saturate,
    triangle_stats,
    validate,
    wedge_coverage_check,
)
from packdens.generators import generate
from packdens.saturation import window

HEX_WINDOW = window(0, 0, 10, 10)


def _hex_triangulation():
    cfg = generate(GeneratorSpec(kind=Kind.HEXAGONAL, window=HEX_WINDOW))
    return delaunay(cfg.points), cfg.window


def test_right_isoceles_stats():
    t = delaunay([point(0, 0), point(2, 0), point(0, 2)])
    s = triangle_stats(t, 0)
    assert s.area == 2
    assert abs(s.density - math.pi / 4) <= DENSITY_TOLERANCE
    assert abs(s.largest_angle - math.pi / 2) <= DENSITY_TOLERANCE
    assert s.circum.radius_squared == 2
    assert not s.is_equilateral_side2


def test_hex_triangle_stats():
    t, win = _hex_triangulation()
    stats = all_triangle_stats(t)
    sqrt3 = math.sqrt(3.0)
    for s in stats:
        assert abs(float(s.area) - sqrt3) < 1e-9
        assert abs(s.density - PACKING_BOUND) <= DENSITY_TOLERANCE
        # lattice triangles are equilateral to ~1e-20 but not exactly, so the
        # exact all-sides-squared-equal-4 test stays False on rational input
        assert not s.is_equilateral_side2
    # away from the boundary the triangles are equilateral: largest angle pi/3
    for i in interior_triangle_indices(t, win, F(2)):
        assert abs(stats[i].largest_angle - math.pi / 3) < 1e-9


def test_defining_identity():
    t, _ = _hex_triangulation()
    for s in all_triangle_stats(t):
        assert abs(s.density * float(s.area) - math.pi / 2) <= 1e-12
    t2 = delaunay([point(0, 0), point(2, 0), point(0, 2)])
    s2 = triangle_stats(t2, 0)
    assert abs(s2.density * float(s2.area) - math.pi / 2) <= 1e-12


def test_largest_angle_range():
    t, _ = _hex_triangulation()
    for s in all_triangle_stats(t):
        assert math.pi / 3 - 1e-12 <= s.largest_angle < math.pi


def test_check_lemma1_pass_cases():
    t, win = _hex_triangulation()
    stats = all_triangle_stats(t)
    res = check_lemma1(stats, saturated=True, win=win)
    assert res.ok
    square = generate(GeneratorSpec(kind=Kind.SQUARE, window=window(0, 0, 8, 8)))
    t2 = delaunay(square.points)
    stats2 = all_triangle_stats(t2)
    res2 = check_lemma1(stats2, saturated=True, win=square.window)
    assert res2.ok
    for s in stats2:
        assert s.circum.radius_squared == 2
        assert abs(s.largest_angle - math.pi / 2) <= DENSITY_TOLERANCE


def test_check_lemma1_flags_insertable_circumcenter():
    # (0,-2),(0,2),(2,0) has circumcenter (0,0) and R^2 = 4: labeling its
    # configuration saturated is inconsistent, and the check says so
    t = delaunay([point(0, -2), point(0, 2), point(2, 0)])
    stats = all_triangle_stats(t)
    assert stats[0].circum.radius_squared == 4
    win = window(-4, -4, 4, 4)
    flagged = check_lemma1(stats, saturated=True, win=win)
    assert not flagged.ok and flagged.witness == 0
    relaxed = check_lemma1(stats, saturated=False, win=win)
    assert relaxed.ok


def test_check_lemma1_window_exemption():
    # same triangle, but a window that excludes the circumcenter: the
    # insertion argument does not apply there, so the triangle is exempt
    t = delaunay([point(0, -2), point(0, 2), point(2, 0)])
    stats = all_triangle_stats(t)
    win = window(F(1, 2), -4, F(17, 2), 4)
    res = check_lemma1(stats, saturated=True, win=win)
    assert res.ok and res.exempt == (0,)


def test_check_lemma2_cases():
    t, win = _hex_triangulation()
    stats = all_triangle_stats(t)
    res = check_lemma2(stats, win=win)
    assert res.ok
    not_exempt = set(range(len(stats))) - set(res.exempt)
    assert set(res.equality) == not_exempt  # bound attained everywhere

    square = generate(GeneratorSpec(kind=Kind.SQUARE, window=window(0, 0, 8, 8)))
    t2 = delaunay(square.points)
    res2 = check_lemma2(all_triangle_stats(t2), win=square.window)
    assert res2.ok and res2.equality == ()  # pi/4 strictly below the bound


def test_check_lemma2_flags_small_area():
    # a fabricated stat with area 1.5 < sqrt(3): density 1.047 exceeds the
    # bound, which the exact area^2 >= 3 test must catch
    bad = TriangleStats(
        index=0, triangle=Triangle(0, 1, 2), area=F(3, 2),
        circum=Circumcircle(Point(F(0), F(0)), F(3)),
        side_lengths_squared=(F(4), F(4), F(5)),
        largest_angle=2.0, density=float(mpmath.pi / 2 / 1.5),
        is_equilateral_side2=False)
    res = check_lemma2([bad])
    assert not res.ok and res.witness == 0


def test_aggregate_two_triangles():
    # one near-equilateral lattice triangle (area ~ sqrt(3)) plus one right
    # isoceles of area 2: the weighted average collapses to pi/(sqrt(3)+2)
    t, _ = _hex_triangulation()
    s1 = all_triangle_stats(t)[0]
    t2 = delaunay([point(0, 0), point(2, 0), point(0, 2)])
    s2 = triangle_stats(t2, 0)
    rep = aggregate([s1, s2], saturated=False)
    expected = float(mpmath.pi / (mpmath.sqrt(3) + 2))
    assert abs(rep.overall_density - expected) < 1e-9
    assert rep.triangle_count == 2


def test_aggregate_hex_patch_hits_bound():
    t, win = _hex_triangulation()
    stats = all_triangle_stats(t)
    rep = aggregate(stats, saturated=True, win=win)
    assert abs(rep.overall_density - PACKING_BOUND) <= DENSITY_TOLERANCE
    assert rep.lemma1_ok and rep.lemma2_ok and rep.bound_ok
    assert rep.max_circumradius_squared < 4


def test_aggregate_single_triangle():
    t = delaunay([point(0, 0), point(2, 0), point(0, 2)])
    s = triangle_stats(t, 0)
    rep = aggregate([s], saturated=False)
    assert rep.overall_density == pytest.approx(s.density, abs=1e-15)
    assert rep.min_density == rep.max_density == s.density


def test_aggregate_empty_raises():
    with pytest.raises(EmptyTriangulation):
        aggregate([])


def test_interior_selection():
    t, win = _hex_triangulation()
    interior = interior_triangle_indices(t, win, F(2))
    assert interior
    deep = [p for p in t.points if win.boundary_depth(p) >= 2]
    for i in interior:
        for v in t.triangles[i]:
            assert t.points[v] in deep
    assert interior_triangle_indices(t, win, F(20)) == []


def test_wedge_coverage_equilateral():
    t, _ = _hex_triangulation()
    cov = wedge_coverage_check(t, 0, samples=10 ** 6, seed=42)
    assert not cov.degenerate
    assert abs(cov.estimate - math.pi / 2) <= 3 * cov.std_error
    assert abs(cov.estimate - math.pi / 2) <= 0.01


def test_wedge_coverage_right_isoceles():
    t = delaunay([point(0, 0), point(2, 0), point(0, 2)])
    cov = wedge_coverage_check(t, 0, samples=10 ** 6, seed=7)
    assert abs(cov.estimate - math.pi / 2) <= 3 * cov.std_error
    assert abs(cov.estimate - math.pi / 2) <= 0.01


def test_wedge_coverage_zero_samples():
    t = delaunay([point(0, 0), point(2, 0), point(0, 2)])
    cov = wedge_coverage_check(t, 0, samples=0, seed=1)
    assert cov.degenerate and cov.estimate == 0.0 and cov.samples == 0


def test_equality_flag_matches_near_equilateral():
    # within 1e-12 of the bound <=> (near-)equilateral side 2; on rational
    # coordinates the exact equilateral test is unattainable, so the flag is
    # tolerance-based while is_equilateral_side2 stays exact
    t, win = _hex_triangulation()
    stats = all_triangle_stats(t)
    res = check_lemma2(stats, win=win)
    for i in res.equality:
        for side in stats[i].side_lengths_squared:
            assert abs(float(side) - 4.0) < 1e-9

    square = generate(GeneratorSpec(kind=Kind.SQUARE, window=window(0, 0, 8, 8)))
    sq_stats = all_triangle_stats(delaunay(square.points))
    sq_res = check_lemma2(sq_stats, win=square.window)
    assert sq_res.equality == ()


def test_saturated_random_configs_satisfy_bounds():
    for seed in (11, 12):
        win = window(0, 0, 12, 12)
        cfg = generate(GeneratorSpec(kind=Kind.RANDOM_DART, window=win,
                                     spacing=F(2), seed=seed))
        sat = saturate(cfg)
        t = delaunay(sat.points)
        stats = all_triangle_stats(t)
        assert check_lemma1(stats, saturated=True, win=win).ok
        assert check_lemma2(stats, win=win).ok
        rep = aggregate(stats, saturated=True, win=win)
        assert rep.lemma1_ok and rep.lemma2_ok
