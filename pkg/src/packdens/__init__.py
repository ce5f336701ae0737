"""packdens: a circle-packing density certifier.

Saturates circle configurations inside a rectangular window, triangulates
them with exact predicates, verifies the empty-circumcircle property, and
certifies that the weighted-average density never exceeds pi/sqrt(12).
"""

__version__ = "0.1.0"

from .density import (
    DENSITY_TOLERANCE,
    PACKING_BOUND,
    CheckResult,
    DegenerateTriangle,
    DensityReport,
    EmptyTriangulation,
    TriangleStats,
    WedgeCoverage,
    aggregate,
    all_triangle_stats,
    check_lemma1,
    check_lemma2,
    interior_triangle_indices,
    triangle_stats,
    wedge_coverage_check,
)
from .generators import (
    GeneratorSpec,
    InvalidSpec,
    Kind,
    PerturbationTooLarge,
    generate,
)
from .geometry import (
    Circumcircle,
    CollinearTriangle,
    LiftedPoint,
    Point,
    Scalar,
    Sign,
    circumcircle,
    distance_squared,
    incircle,
    lift,
    orient2d,
    orient3d,
    point,
    scalar,
    triangle_area,
)
from .pointfile import PointFile, PointFileError, format_point_file, \
    parse_point_file
from .saturation import (
    Configuration,
    InvalidWindow,
    OutOfWindow,
    PairTooClose,
    Window,
    Witness,
    find_witness,
    is_saturated,
    min_pairwise_distance_squared,
    saturate,
    validate,
    window,
)
from .triangulation import (
    AllCollinear,
    DuplicatePoint,
    StructureError,
    TooFewPoints,
    Triangle,
    Triangulation,
    VerificationResult,
    convex_hull,
    convex_hull_area,
    delaunay,
    hull_shoelace_area,
    triangulation_edges,
    validate_structure,
    verify_delaunay,
)

__all__ = [name for name in dir() if not name.startswith("_")]
