"""Reference and randomized configuration generators.

All generated coordinates are exact rationals and every output passes the
configuration validator (pairwise distance >= 2, all points in the window).
Randomized kinds are fully determined by the seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .geometry import Point
from .saturation import Configuration, PairTooClose, Window, validate

DART_FAILURE_BUDGET = 10_000  # consecutive rejections before dart throwing stops

_SQRT3_DIGITS = 50
_HEX_PAD = Fraction(1, 10 ** 20)


class GeneratorError(Exception):
    pass


class InvalidSpec(GeneratorError):
    pass


class PerturbationTooLarge(GeneratorError):
    pass


class Kind(str, Enum):
    HEXAGONAL = "hex"
    SQUARE = "square"
    PERTURBED_HEX = "perturbed-hex"
    RANDOM_DART = "random-dart"


@dataclass(frozen=True)
class GeneratorSpec:
    kind: Kind
    window: Window
    spacing: Fraction = Fraction(2)
    perturbation: Fraction = Fraction(0)
    seed: int = 0


def _sqrt3_under() -> Fraction:
    """Rational under-approximation of sqrt(3), accurate to 50 digits."""
    s = 10 ** _SQRT3_DIGITS
    return Fraction(math.isqrt(3 * s * s), s)


def _hex_lattice(win: Window, spacing: Fraction) -> list[Point]:
    """Hexagonal rows: the vertical pitch uses an under-approximation of
    sqrt(3)/2 (rows marginally too close), so the horizontal pitch is padded
    to keep every pairwise distance >= spacing exactly.  The padding is far
    below the 1e-10 equilateral tolerance quoted for the lattice triangles."""
    v_pitch = spacing * _sqrt3_under() / 2
    h_pitch = spacing + _HEX_PAD
    points = []
    j = 0
    while True:
        y = win.ymin + j * v_pitch
        if y > win.ymax:
            break
        offset = h_pitch / 2 if j % 2 else Fraction(0)
        i = 0
        while True:
            x = win.xmin + offset + i * h_pitch
            if x > win.xmax:
                break
            points.append(Point(x, y))
            i += 1
        j += 1
    return points


def _square_lattice(win: Window, spacing: Fraction) -> list[Point]:
    points = []
    j = 0
    while True:
        y = win.ymin + j * spacing
        if y > win.ymax:
            break
        i = 0
        while True:
            x = win.xmin + i * spacing
            if x > win.xmax:
                break
            points.append(Point(x, y))
            i += 1
        j += 1
    return points


def _perturbed_hex(win: Window, spacing: Fraction, perturbation: Fraction,
                   seed: int) -> list[Point]:
    base = _hex_lattice(win, spacing)
    rng = np.random.default_rng(seed)
    radius = float(perturbation)
    points = []
    for p in base:
        r = radius * math.sqrt(rng.random())
        theta = 2.0 * math.pi * rng.random()
        x, y = win.clamp(p.x + Fraction(r * math.cos(theta)),
                         p.y + Fraction(r * math.sin(theta)))
        points.append(Point(x, y))
    return points


def _random_dart(win: Window, spacing: Fraction, seed: int) -> list[Point]:
    """Dart throwing: uniform candidates, rejected when closer than
    ``spacing`` to an accepted point, until the failure budget runs out.

    The float distance screen keeps a safety margin above spacing^2, so
    every accepted pair clears the exact threshold.
    """
    rng = np.random.default_rng(seed)
    s_float = float(spacing)
    s2_margin = s_float * s_float + 1e-9
    points: list[Point] = []
    accepted_x: list[float] = []
    accepted_y: list[float] = []
    width, height = win.width, win.height
    fx0, fy0 = float(win.xmin), float(win.ymin)
    fw, fh = float(width), float(height)
    failures = 0
    batch = 4096
    # Candidates are screened in float batches against the points accepted so
    # far; once one is accepted, the rest of its batch is re-checked against
    # the new arrivals, which reproduces the sequential rejection process.
    # Accepted candidates are rebuilt exactly from their unit random pair, so
    # the configuration invariants get decided in exact arithmetic (the 1e-9
    # screening margin absorbs every float rounding effect).
    while failures < DART_FAILURE_BUDGET:
        us = rng.random(batch)
        vs = rng.random(batch)
        fxs = fx0 + us * fw
        fys = fy0 + vs * fh
        if accepted_x:
            ax = np.asarray(accepted_x)
            ay = np.asarray(accepted_y)
            d2 = ((fxs[:, None] - ax[None, :]) ** 2
                  + (fys[:, None] - ay[None, :]) ** 2).min(axis=1)
            ok_old = d2 > s2_margin
        else:
            ok_old = np.ones(batch, dtype=bool)
        cell = s_float * (1.0 + 1e-9)
        fresh: dict[tuple[int, int], list[tuple[float, float]]] = {}
        for k in range(batch):
            if failures >= DART_FAILURE_BUDGET:
                break
            ok = bool(ok_old[k])
            if ok and fresh:
                fx, fy = fxs[k], fys[k]
                cx = int(fx // cell)
                cy = int(fy // cell)
                for dx in (-1, 0, 1):
                    for dy in (-1, 0, 1):
                        for qx, qy in fresh.get((cx + dx, cy + dy), ()):
                            if (qx - fx) ** 2 + (qy - fy) ** 2 <= s2_margin:
                                ok = False
                                break
                        if not ok:
                            break
                    if not ok:
                        break
            if ok:
                points.append(Point(win.xmin + Fraction(us[k]) * width,
                                    win.ymin + Fraction(vs[k]) * height))
                accepted_x.append(float(fxs[k]))
                accepted_y.append(float(fys[k]))
                key = (int(fxs[k] // cell), int(fys[k] // cell))
                fresh.setdefault(key, []).append((float(fxs[k]), float(fys[k])))
                failures = 0
            else:
                failures += 1
    return points


def generate(spec: GeneratorSpec) -> Configuration:
    """Produce a validated configuration for the given spec.

    Raises InvalidSpec for spacing < 2 or negative perturbation, and
    PerturbationTooLarge when perturbed points end up closer than 2.
    """
    if spec.spacing < 2:
        raise InvalidSpec(f"spacing must be >= 2, got {spec.spacing}")
    if spec.perturbation < 0:
        raise InvalidSpec("perturbation must be >= 0")
    kind = Kind(spec.kind)
    if kind is Kind.HEXAGONAL:
        points = _hex_lattice(spec.window, spec.spacing)
    elif kind is Kind.SQUARE:
        points = _square_lattice(spec.window, spec.spacing)
    elif kind is Kind.PERTURBED_HEX:
        points = _perturbed_hex(spec.window, spec.spacing,
                                spec.perturbation, spec.seed)
    else:
        points = _random_dart(spec.window, spec.spacing, spec.seed)
    try:
        return validate(points, spec.window)
    except PairTooClose as exc:
        if kind is Kind.PERTURBED_HEX:
            raise PerturbationTooLarge(
                f"perturbation {spec.perturbation} breaks the pairwise "
                f"distance bound: {exc}") from exc
        raise
