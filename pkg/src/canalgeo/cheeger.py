"""Cheeger sets of planar convex bodies.

For a planar convex body ``C`` the Cheeger set is the inner parallel body
``C_{-t}`` rolled by a disc of radius ``t``, where ``t`` is the unique root of
``area(C_{-t}) = pi t^2``. At that root the set has area/perimeter exactly
``t``, so ``t`` is the Cheeger ratio (volume-to-boundary convention).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import geom2d
from .geom2d import Degenerate2D, RoundedPolygon, Segment1D
from ._tol import DegenerateInput

MAX_ITER = 200


@dataclass(frozen=True, eq=False)
class CheegerResult:
    t_star: float
    cheeger_set: RoundedPolygon
    core: object
    residual: float

    @property
    def ratio(self) -> float:
        A, P = geom2d.measure2d(self.cheeger_set)
        return A / P


def area_gap(C, t: float) -> float:
    """``area(C_{-t}) - pi t^2``; strictly decreasing on ``[0, inradius]``."""
    return geom2d.body_area(geom2d.inner_parallel_body(C, t)) - math.pi * t * t


def cheeger_2d(C) -> CheegerResult:
    if isinstance(C, Degenerate2D) or C.area <= 0:
        raise DegenerateInput("body has zero area")
    lo, hi = 0.0, geom2d.inradius(C)
    t = hi
    # bisect to the resolution of doubles; g(0) > 0 >= g(inradius)
    for _ in range(MAX_ITER):
        t = 0.5 * (lo + hi)
        if not lo < t < hi:
            break
        g = area_gap(C, t)
        if g == 0:
            break
        if g > 0:
            lo = t
        else:
            hi = t
    core = geom2d.inner_parallel_body(C, t)
    if core is None:
        raise DegenerateInput("inner parallel body vanished at the root")
    if isinstance(core, RoundedPolygon):
        cs = RoundedPolygon(core.core, core.radius + t)
    else:
        cs = RoundedPolygon(core, t)
    return CheegerResult(t, cs, core, abs(core.area - math.pi * t * t))


def is_cheeger_set(C, tol: float | None = None) -> bool:
    """True iff ``C`` is within Hausdorff distance ``tol`` of its Cheeger set.

    Polygons are never exactly calibrable, so the default tolerance is
    ``1e-6 * diameter(C)``.
    """
    if tol is None:
        tol = 1e-6 * C.diameter()
    return calibration_distance(C) <= tol


def calibration_distance(C) -> float:
    """Hausdorff distance between ``C`` and its Cheeger set."""
    return geom2d.hausdorff2d(C, cheeger_2d(C).cheeger_set)


def cheeger_1d(S: Segment1D) -> float:
    """Cheeger ratio of a segment: length over the two boundary points."""
    return S.length / 2.0


def cheeger_ratio(C) -> float:
    """Cheeger ratio for a segment or planar body."""
    if isinstance(C, Segment1D):
        return cheeger_1d(C)
    return cheeger_2d(C).t_star
