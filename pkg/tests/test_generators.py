"""Generator determinism, validity, and lattice geometry."""

from fractions import Fraction as F

import pytest

from packdens import (
    GeneratorSpec,
    InvalidSpec,
    Kind,
    PerturbationTooLarge,
    all_triangle_stats,
    delaunay,
    distance_squared,
    find_witness,
    generate,
    saturate,
    validate,
)
from packdens.density import interior_triangle_indices
from packdens.saturation import window


def test_hex_lattice_properties():
    win = window(0, 0, 10, 10)
    cfg = generate(GeneratorSpec(kind=Kind.HEXAGONAL, window=win))
    assert len(cfg.points) >= 25
    n = len(cfg.points)
    for i in range(n):
        for j in range(i + 1, n):
            assert distance_squared(cfg.points[i], cfg.points[j]) >= 4
    # interior triangles are equilateral to 1e-10
    t = delaunay(cfg.points)
    interior = interior_triangle_indices(t, win, F(2))
    assert interior
    stats = all_triangle_stats(t)
    for i in interior:
        for side in stats[i].side_lengths_squared:
            assert abs(float(side) - 4.0) < 1e-10


def test_square_lattice_8x8():
    cfg = generate(GeneratorSpec(kind=Kind.SQUARE, window=window(0, 0, 8, 8)))
    assert len(cfg.points) == 25  # 5x5 grid
    assert find_witness(cfg) is None


def test_random_dart_deterministic():
    win = window(0, 0, 12, 12)
    spec = GeneratorSpec(kind=Kind.RANDOM_DART, window=win, spacing=F(2),
                         seed=99)
    a = generate(spec)
    b = generate(spec)
    assert a.points == b.points
    c = generate(GeneratorSpec(kind=Kind.RANDOM_DART, window=win,
                               spacing=F(2), seed=100))
    assert c.points != a.points


def test_perturbed_hex_valid_and_deterministic():
    win = window(0, 0, 12, 12)
    spec = GeneratorSpec(kind=Kind.PERTURBED_HEX, window=win,
                         spacing=F(5, 2), perturbation=F(1, 5), seed=5)
    a = generate(spec)
    assert a.points == generate(spec).points
    base = generate(GeneratorSpec(kind=Kind.HEXAGONAL, window=win,
                                  spacing=F(5, 2)))
    assert len(a.points) == len(base.points)
    for p, q in zip(a.points, base.points):
        assert distance_squared(p, q) <= F(1, 25)


def test_perturbation_too_large():
    win = window(0, 0, 12, 12)
    with pytest.raises(PerturbationTooLarge):
        generate(GeneratorSpec(kind=Kind.PERTURBED_HEX, window=win,
                               spacing=F(2), perturbation=F(1, 2), seed=1))


def test_invalid_spacing():
    with pytest.raises(InvalidSpec):
        generate(GeneratorSpec(kind=Kind.HEXAGONAL,
                               window=window(0, 0, 10, 10), spacing=F(1)))


def test_every_kind_validates():
    win = window(0, 0, 10, 10)
    for kind in Kind:
        spec = GeneratorSpec(kind=kind, window=win, spacing=F(21, 10),
                             perturbation=F(1, 100), seed=3)
        cfg = generate(spec)
        validate(cfg.points, win)  # must not raise


def test_hex_saturation_unchanged():
    cfg = generate(GeneratorSpec(kind=Kind.HEXAGONAL,
                                 window=window(0, 0, 10, 10)))
    assert saturate(cfg).points == cfg.points
