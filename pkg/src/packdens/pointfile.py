"""The plain-text point file format.

One point per line as "x,y"; coordinates are decimal ("1.25", parsed
losslessly) or rational ("5/4") literals.  A single header line

    window xmin ymin xmax ymax

declares the rectangular window.  Everything after '#' on a line is a
comment; rational coordinates round-trip exactly, so saturation output can be
re-read without loss.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .geometry import Point
from .saturation import Window


class PointFileError(Exception):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class PointFile:
    points: tuple[Point, ...]
    window: Window
    line_numbers: tuple[int, ...]  # 1-based source line of each point


def _parse_scalar(text: str, line: int) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise PointFileError(f"bad coordinate {text!r}: {exc}", line) from exc


def parse_point_file(text: str) -> PointFile:
    points: list[Point] = []
    line_numbers: list[int] = []
    window: Optional[Window] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if body.startswith("window"):
            fields = body.split()
            if len(fields) != 5:
                raise PointFileError(
                    "window header needs 4 values: window xmin ymin xmax ymax",
                    lineno)
            if window is not None:
                raise PointFileError("duplicate window header", lineno)
            vals = [_parse_scalar(f, lineno) for f in fields[1:]]
            try:
                window = Window(*vals)
            except Exception as exc:
                raise PointFileError(str(exc), lineno) from exc
            continue
        parts = body.split(",")
        if len(parts) != 2:
            raise PointFileError(f"expected 'x,y', got {body!r}", lineno)
        x = _parse_scalar(parts[0].strip(), lineno)
        y = _parse_scalar(parts[1].strip(), lineno)
        points.append(Point(x, y))
        line_numbers.append(lineno)
    if window is None:
        raise PointFileError("missing 'window xmin ymin xmax ymax' header")
    return PointFile(tuple(points), window, tuple(line_numbers))


def format_point_file(points: Sequence[Point], window: Window,
                      inserted_from: Optional[int] = None,
                      comment: Optional[str] = None) -> str:
    """Serialize points and window; points with index >= inserted_from are
    tagged with an '# inserted' provenance comment."""
    lines = []
    if comment:
        lines.append(f"# {comment}")
    lines.append(f"window {window.xmin} {window.ymin} "
                 f"{window.xmax} {window.ymax}")
    for i, p in enumerate(points):
        tag = "  # inserted" if inserted_from is not None and i >= inserted_from else ""
        lines.append(f"{p.x},{p.y}{tag}")
    return "\n".join(lines) + "\n"
