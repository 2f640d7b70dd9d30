"""Explicit bodies: closed-form measures in every dimension, polytopes for n = 3.

Bodies
------
AH        unit-cube prism of height h with the corner simplex
          conv{0, e_1/3, ..., e_{n-1}/3, h e_n} removed
PYRAMID_C simplex conv{0, h^2 e_1, ..., h^2 e_{n-1}, e_n}
PYRAMID_D PYRAMID_C truncated to [0, h]^{n-1} x R
KN        conv{0, e1, e2, e1+e2, e3}, times [0, 1]^{n-3}
LH        [0, h^{n-2} e_2] + [0, e_3/h] + ... + [0, e_n/h]
LH_TILDE  LH + [0, e_1/h]
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import geom2d, geom3d
from .geom3d import ConvexPolytope3


class BodyKind(enum.Enum):
    AH = "AH"
    CYLINDER_CUBE = "CYLINDER_CUBE"
    PYRAMID_C = "PYRAMID_C"
    PYRAMID_D = "PYRAMID_D"
    KN = "KN"
    LH = "LH"
    LH_TILDE = "LH_TILDE"


@dataclass(frozen=True, eq=False)
class ClosedFormBody:
    kind: BodyKind
    n: int
    h: float | None
    volume: float
    surface_area: float
    projections: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)
    polytope: ConvexPolytope3 | None = None
    polygon: geom2d.ConvexPolygon | None = None

    @property
    def ratio(self) -> float:
        return self.volume / self.surface_area

    def as_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "n": self.n,
            "h": self.h,
            "volume": self.volume,
            "surface_area": self.surface_area,
            "ratio": self.ratio,
            "projections": dict(self.projections),
            **self.extra,
        }


def _fact(k: int) -> int:
    return math.factorial(k)


# -- cylinder over the unit cube and its cut ------------------------------


def build_cylinder_cube(n: int, h: float) -> ClosedFormBody:
    poly = geom3d.box(1.0, 1.0, h) if n == 3 else None
    return ClosedFormBody(
        BodyKind.CYLINDER_CUBE, n, h, float(h), 2 * (n - 1) * h + 2.0,
        projections={"e_n": 1.0}, polytope=poly,
    )


def ah_measures(n: int, h: float) -> dict:
    """Volume and the facet areas of the cut corner simplex."""
    f_n = 1.0 / (3 ** (n - 1) * _fact(n - 1))
    f_i = h / (3 ** (n - 2) * _fact(n - 1))
    base = math.sqrt(n - 1) / (3 ** (n - 2) * _fact(n - 2))
    slant = math.sqrt(h * h + 1.0 / (9 * (n - 1)))
    f_0 = base * slant / (n - 1)
    volume = h - h / (3 ** (n - 1) * _fact(n))
    surface = (2 * (n - 1) * h + 2.0) - (n - 1) * f_i - f_n + f_0
    return {
        "volume": volume,
        "surface_area": surface,
        "facet_bottom": f_n,
        "facet_side": f_i,
        "facet_slant": f_0,
        "eps": slant / h - 1.0,
    }


def build_AH(n: int, h: float) -> ClosedFormBody:
    if n < 3 or not h > 0:
        raise ValueError("AH needs n >= 3 and h > 0")
    m = ah_measures(n, h)
    poly = None
    if n == 3:
        # the removed corner is the prism part below the plane through
        # e1/3, e2/3 and h e3
        poly = geom3d.halfspace_cut(geom3d.box(1.0, 1.0, h), [-3.0, -3.0, -1.0 / h], -1.0)
    extra = {k: m[k] for k in ("facet_bottom", "facet_side", "facet_slant", "eps")}
    extra["cylinder_limit"] = 1.0 / (2 * (n - 1))
    return ClosedFormBody(
        BodyKind.AH, n, h, m["volume"], m["surface_area"],
        projections={"e_n": 1.0}, extra=extra, polytope=poly,
    )


def ah_ratio(n: int, h: float) -> float:
    m = ah_measures(n, h)
    return m["volume"] / m["surface_area"]


def ah_crossover(n: int) -> float:
    """Height above which AH beats the cylinder limit ``1/(2(n-1))``."""
    target = 1.0 / (2 * (n - 1))

    def f(h):
        m = ah_measures(n, h)
        return m["surface_area"] - m["volume"] / target

    lo, hi = 1.0, 2.0
    while f(hi) >= 0:
        lo, hi = hi, 2 * hi
        if hi > 1e15:
            return math.inf
    return brentq(f, lo, hi, xtol=1e-12, rtol=1e-15)


# -- pyramid C(h) and its truncation D ------------------------------------


def pyramid_slab_eps(n: int, h: float) -> float:
    """Smallest eps with ``[0,h]^{n-1} x [0, 1 - eps/2]`` inside D."""
    return 2.0 * (n - 1) / h


def build_pyramid(n: int, h: float) -> tuple[ClosedFormBody, ClosedFormBody]:
    """``(C(h), D)``; polygons for n = 2, polytopes for n = 3."""
    if n < 2:
        raise ValueError("pyramid needs n >= 2")
    if h < max(1.0, n - 1):
        raise ValueError("closed forms for D need h >= max(1, n - 1)")
    k = n - 1
    top_stretch = math.sqrt(1.0 + k / h**4)
    base_c = h ** (2 * k) / _fact(k)
    vol_c = h ** (2 * k) / _fact(n)
    surf_c = base_c + k * h ** (2 * (k - 1)) / _fact(k) + base_c * top_stretch
    vol_d = h**k - k * h ** (k - 1) / 2.0
    side0 = h ** (k - 1) - (k - 1) * h ** (k - 2) / 2.0 if k > 1 else 1.0
    side1 = h ** (k - 1) * (1 - 1.0 / h) - (k - 1) * h ** (k - 2) / 2.0 if k > 1 else 1.0 - 1.0 / h
    surf_d = h**k + h**k * top_stretch + k * (side0 + side1)
    polyC = polyD = polytC = polytD = None
    if n == 2:
        polyC = geom2d.ConvexPolygon([[0, 0], [h * h, 0], [0, 1]])
        polyD = geom2d.hull2d([[0, 0], [h, 0], [h, 1 - 1.0 / h], [0, 1]])
    elif n == 3:
        polytC = geom3d.hull3d([[0, 0, 0], [h * h, 0, 0], [0, h * h, 0], [0, 0, 1]])
        polytD = geom3d.halfspace_cut(geom3d.halfspace_cut(polytC, [1, 0, 0], h), [0, 1, 0], h)
    C = ClosedFormBody(BodyKind.PYRAMID_C, n, h, vol_c, surf_c, polygon=polyC, polytope=polytC,
                       extra={"bound": 1.0 / (2 * n)})
    D = ClosedFormBody(BodyKind.PYRAMID_D, n, h, vol_d, surf_d, polygon=polyD, polytope=polytD,
                       extra={"slab_eps": pyramid_slab_eps(n, h)})
    return C, D


# -- K_n and L_h ----------------------------------------------------------

K3_VERTICES = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1]], dtype=float)


def build_Kn(n: int) -> ClosedFormBody:
    if n < 3:
        raise ValueError("K_n needs n >= 3")
    poly = geom3d.hull3d(K3_VERTICES) if n == 3 else None
    return ClosedFormBody(
        BodyKind.KN, n, None, 1.0 / 3.0,
        # the surface is only meaningful (and only realised) for n = 3
        poly.surface_area if poly is not None else math.nan,
        projections={"e1": 0.5, "e2": 0.5, "e1,e2": 1.0},
        polytope=poly,
    )


def _box_surface(sides) -> float:
    total = 0.0
    for i in range(len(sides)):
        total += 2 * math.prod(s for j, s in enumerate(sides) if j != i)
    return total


def lh_sides(n: int, h: float, tilde: bool) -> list[float]:
    """Edge lengths along e_1, ..., e_n."""
    return [1.0 / h if tilde else 0.0, h ** (n - 2)] + [1.0 / h] * (n - 2)


def build_LH(n: int, h: float, tilde: bool = False) -> ClosedFormBody:
    if n < 3 or not h > 0:
        raise ValueError("L_h needs n >= 3 and h > 0")
    sides = lh_sides(n, h, tilde)
    proj_e1 = math.prod(sides[1:])
    kind = BodyKind.LH_TILDE if tilde else BodyKind.LH
    extra = {"sides": sides}
    poly = None
    if tilde:
        vol, surf = math.prod(sides), _box_surface(sides)
        if n == 3:
            poly = geom3d.box(*sides)
    else:
        # (n-1)-dimensional: volume 0, both sides of the flat body as boundary
        vol, surf = 0.0, 2.0 * proj_e1
        extra["relative_volume"] = proj_e1
        if n == 3:
            extra["points"] = np.array([[0, y, z] for y in (0, sides[1]) for z in (0, sides[2])], float)
    return ClosedFormBody(kind, n, h, vol, surf, projections={"e1": proj_e1}, extra=extra, polytope=poly)


def lh_points(h: float, tilde: bool = True) -> np.ndarray:
    """Vertices of L_h (or its full-dimensional variant) for n = 3."""
    s = lh_sides(3, h, tilde)
    return np.array([[x, y, z] for x in {0.0, s[0]} for y in (0.0, s[1]) for z in (0.0, s[2])])


def k3_normalized() -> ConvexPolytope3:
    """K_3 scaled by sqrt(2) in e2 and e3, so its projection along e1 has area 1.

    Both ratios used with L_h are unchanged: volume over the e1-projection is
    2/3 and the e2-projection over the double projection is 1/2.
    """
    return geom3d.hull3d(K3_VERTICES @ np.diag([1.0, math.sqrt(2), math.sqrt(2)]))


def _coord_body(points: np.ndarray, keep: list[int]):
    return geom2d.convex_body(points[:, keep])


def lh_bracket(K: ConvexPolytope3, h: float, tilde: bool = True) -> dict:
    """Slab bounds on ``vol(K + L_h)`` and its e1-projection area (n = 3).

    ``K + L_h`` lies between ``P(K) + [b e2, (h + a) e2]`` and
    ``(P(K) + Q/h) + [a e2, (h + b) e2]``, with ``P`` the projection along e2,
    ``Q = [0, e3]`` and ``[a, b]`` the e2-extent of ``K``; the full-dimensional
    variant adds ``[0, e1/h]`` to the outer body.
    """
    V = K.vertices
    a, b = float(V[:, 1].min()), float(V[:, 1].max())
    w = b - a
    if h <= w:
        raise ValueError("bracket needs h > e2-width of K")
    Pxz = _coord_body(V, [0, 2])
    extra = [[0, 0], [0, 1.0 / h]] + ([[1.0 / h, 0], [1.0 / h, 1.0 / h]] if tilde else [])
    Pxz_out = geom2d.minkowski_sum2d(Pxz, geom2d.convex_body(extra))
    z = V[:, 2]
    seg = float(z.max() - z.min())
    vol_lo, vol_hi = Pxz.area * (h - w), Pxz_out.area * (h + w)
    prj_lo, prj_hi = seg * (h - w), (seg + 1.0 / h) * (h + w)
    return {
        "volume": (vol_lo, vol_hi),
        "projection": (prj_lo, prj_hi),
        "ratio": (vol_lo / prj_hi, vol_hi / prj_lo),
        "limit": Pxz.area / seg,
    }
