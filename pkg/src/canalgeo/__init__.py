"""Volume-to-surface ratios of convex bodies in a canal class.

Planar Cheeger sets, exact 3D polytope measures, explicit constructions
and seeded inequality checks.
"""

from ._tol import (
    TAU,
    DegenerateInput,
    GeometryError,
    PreconditionViolated,
    ProjectionMismatch,
    ScaleLimit,
)
from .canal import CanalReport, canal_bounds, cylinder_limit_ratio, slice_ratio, verdict_q1_3d
from .cheeger import CheegerResult, cheeger_2d, is_cheeger_set
from .constructions import BodyKind, ClosedFormBody, build_AH, build_Kn, build_LH, build_pyramid
from .geom2d import ConvexPolygon, RoundedPolygon, inner_parallel_body, minkowski_sum2d
from .geom3d import ConvexPolytope3, hull3d, minkowski_sum3d
from .verify import CheckOutcome

__version__ = "0.1.0"

__all__ = [
    "TAU",
    "BodyKind",
    "CanalReport",
    "CheckOutcome",
    "CheegerResult",
    "ClosedFormBody",
    "ConvexPolygon",
    "ConvexPolytope3",
    "DegenerateInput",
    "GeometryError",
    "PreconditionViolated",
    "ProjectionMismatch",
    "RoundedPolygon",
    "ScaleLimit",
    "build_AH",
    "build_Kn",
    "build_LH",
    "build_pyramid",
    "canal_bounds",
    "cheeger_2d",
    "cylinder_limit_ratio",
    "hull3d",
    "inner_parallel_body",
    "is_cheeger_set",
    "minkowski_sum2d",
    "minkowski_sum3d",
    "slice_ratio",
    "verdict_q1_3d",
]
