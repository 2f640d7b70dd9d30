"""Planar convex geometry: polygons, rounded polygons, Minkowski sums and
inner parallel bodies.

All bodies are immutable. Vertices are stored as read-only ``(k, 2)`` float
arrays in counterclockwise order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from ._tol import TAU, DegenerateInput


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def hull_indices(points, tol: float = TAU) -> np.ndarray:
    """Indices of the strict convex hull vertices (ccw) of planar points.

    Returns 1, 2 or >= 3 indices. Duplicates and points lying on hull edges
    (within relative tolerance ``tol``) are dropped.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise DegenerateInput("empty point set")
    scale = max(1.0, float(np.abs(pts).max()))
    eps = tol * scale
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    uniq = []
    for i in order:
        p = pts[i]
        if not uniq or abs(p[0] - pts[uniq[-1]][0]) > eps or abs(p[1] - pts[uniq[-1]][1]) > eps:
            uniq.append(i)
    if len(uniq) == 1:
        return np.array(uniq)

    def turn(io, ia, ib):
        # 1: strict left turn at a; 0: a is between o and b or a right turn;
        # -1: collinear with b between o and a, so b (not a) is the redundant point
        o, a, b = pts[io], pts[ia], pts[ib]
        la = math.hypot(a[0] - o[0], a[1] - o[1])
        lb = math.hypot(b[0] - a[0], b[1] - a[1])
        c, lim = _cross(o, a, b), tol * max(la * lb, eps * eps)
        if c > lim:
            return 1
        back = (a[0] - o[0]) * (b[0] - a[0]) + (a[1] - o[1]) * (b[1] - a[1]) < 0
        ahead = (a[0] - o[0]) * (b[0] - o[0]) + (a[1] - o[1]) * (b[1] - o[1]) >= 0
        return -1 if c >= -lim and back and ahead else 0

    def chain(seq):
        out = []
        for i in seq:
            while len(out) >= 2:
                t = turn(out[-2], out[-1], i)
                if t:
                    break
                out.pop()
            if len(out) < 2 or t == 1:
                out.append(i)
        return out

    cyc = chain(uniq)[:-1] + chain(uniq[::-1])[:-1]
    # the chain junctions were never turn-tested
    changed = True
    while changed and len(cyc) >= 3:
        changed = False
        for k in range(len(cyc)):
            t = turn(cyc[k - 1], cyc[k], cyc[(k + 1) % len(cyc)])
            if t != 1:
                del cyc[(k + 1) % len(cyc) if t == -1 else k]
                changed = True
                break
    if len(cyc) < 2:
        cyc = [uniq[0], uniq[-1]]
    if len(cyc) == 2 and math.hypot(*(pts[cyc[1]] - pts[cyc[0]])) <= eps:
        cyc = cyc[:1]
    return np.array(cyc)


def _hull_cycle(points, tol: float = TAU) -> np.ndarray:
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    return pts[hull_indices(pts, tol)]


def _support(vertices: np.ndarray, u):
    vals = np.max(np.asarray(u, dtype=float) @ vertices.T, axis=-1)
    return float(vals) if np.ndim(vals) == 0 else vals


@dataclass(frozen=True, eq=False)
class ConvexPolygon:
    """Strictly convex polygon with counterclockwise vertices."""

    vertices: np.ndarray

    def __post_init__(self):
        v = _frozen(self.vertices)
        if v.ndim != 2 or v.shape[1] != 2 or len(v) < 3:
            raise DegenerateInput("a polygon needs at least 3 planar vertices")
        k = len(v)
        for i in range(k):
            a, b, c = v[i - 1], v[i], v[(i + 1) % k]
            la = math.hypot(*(b - a))
            lb = math.hypot(*(c - b))
            if _cross(a, b, c) <= TAU * la * lb:
                raise DegenerateInput("vertices are not in strictly convex ccw position")
        object.__setattr__(self, "vertices", v)

    @property
    def edges(self) -> np.ndarray:
        return np.roll(self.vertices, -1, axis=0) - self.vertices

    @property
    def area(self) -> float:
        x, y = self.vertices[:, 0], self.vertices[:, 1]
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))

    @property
    def perimeter(self) -> float:
        return float(np.hypot(*self.edges.T).sum())

    @property
    def centroid(self) -> np.ndarray:
        v = self.vertices
        w = np.roll(v, -1, axis=0)
        c = v[:, 0] * w[:, 1] - w[:, 0] * v[:, 1]
        return (v + w).T @ c / (6.0 * self.area)

    def halfplanes(self):
        """Unit outward normals ``n`` and offsets ``b`` with P = {x : n.x <= b}."""
        e = self.edges
        n = np.column_stack([e[:, 1], -e[:, 0]])
        n /= np.hypot(n[:, 0], n[:, 1])[:, None]
        b = np.einsum("ij,ij->i", n, self.vertices)
        return n, b

    def support(self, u):
        """Support function at ``u``; accepts a single direction or a stack."""
        return _support(self.vertices, u)

    def diameter(self) -> float:
        d = self.vertices[:, None, :] - self.vertices[None, :, :]
        return float(np.sqrt((d**2).sum(-1)).max())

    def translate(self, t) -> "ConvexPolygon":
        return ConvexPolygon(self.vertices + np.asarray(t, dtype=float))

    def scale(self, s: float) -> "ConvexPolygon":
        if s <= 0:
            raise ValueError("scale factor must be positive")
        return ConvexPolygon(self.vertices * s)

    def contains(self, x, tol: float = TAU) -> bool:
        n, b = self.halfplanes()
        return bool(np.all(n @ np.asarray(x, dtype=float) <= b + tol))


@dataclass(frozen=True, eq=False)
class Degenerate2D:
    """A point (1 vertex) or segment (2 vertices) arising as a degenerate hull."""

    vertices: np.ndarray

    def __post_init__(self):
        v = _frozen(self.vertices).reshape(-1, 2)
        if len(v) not in (1, 2):
            raise ValueError("a degenerate planar body has 1 or 2 vertices")
        object.__setattr__(self, "vertices", v)

    @property
    def is_point(self) -> bool:
        return len(self.vertices) == 1

    @property
    def length(self) -> float:
        if self.is_point:
            return 0.0
        return float(np.hypot(*(self.vertices[1] - self.vertices[0])))

    area = 0.0

    @property
    def perimeter(self) -> float:
        # boundary of a segment traversed both ways, so Steiner formulas hold
        return 2.0 * self.length

    @property
    def centroid(self) -> np.ndarray:
        return self.vertices.mean(axis=0)

    def support(self, u):
        return _support(self.vertices, u)

    def diameter(self) -> float:
        return self.length

    def translate(self, t) -> "Degenerate2D":
        return Degenerate2D(self.vertices + np.asarray(t, dtype=float))

    def scale(self, s: float) -> "Degenerate2D":
        return Degenerate2D(self.vertices * s)


Core2D = Union[ConvexPolygon, Degenerate2D]


@dataclass(frozen=True, eq=False)
class RoundedPolygon:
    """Minkowski sum ``core + radius * disc``.

    Planar Cheeger sets are exactly of this form. A point core gives a disc.
    """

    core: Core2D
    radius: float

    def __post_init__(self):
        if not isinstance(self.core, (ConvexPolygon, Degenerate2D)):
            raise TypeError("core must be a ConvexPolygon or Degenerate2D")
        if not self.radius >= 0:
            raise ValueError("radius must be nonnegative")
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def area(self) -> float:
        r = self.radius
        return self.core.area + r * self.core.perimeter + math.pi * r * r

    @property
    def perimeter(self) -> float:
        return self.core.perimeter + 2.0 * math.pi * self.radius

    def support(self, u):
        u = np.asarray(u, dtype=float)
        return self.core.support(u) + self.radius * np.linalg.norm(u, axis=-1)

    def diameter(self) -> float:
        return self.core.diameter() + 2.0 * self.radius

    def translate(self, t) -> "RoundedPolygon":
        return RoundedPolygon(self.core.translate(t), self.radius)

    def scale(self, s: float) -> "RoundedPolygon":
        return RoundedPolygon(self.core.scale(s), self.radius * s)


@dataclass(frozen=True)
class Segment1D:
    """A one-dimensional convex body."""

    length: float

    def __post_init__(self):
        if not self.length > 0:
            raise DegenerateInput("segment length must be positive")


Body2D = Union[ConvexPolygon, RoundedPolygon, Degenerate2D]


def convex_body(points, tol: float = TAU) -> Core2D:
    """Hull of ``points`` as a polygon, or a point/segment when degenerate."""
    cyc = _hull_cycle(points, tol)
    if len(cyc) >= 3:
        return ConvexPolygon(cyc)
    return Degenerate2D(cyc)


def hull2d(points) -> ConvexPolygon:
    """Convex hull of at least three non-collinear planar points."""
    body = convex_body(points)
    if not isinstance(body, ConvexPolygon):
        raise DegenerateInput("points have affine dimension < 2")
    return body


def measure2d(P: Body2D) -> tuple[float, float]:
    """``(area, perimeter)`` of a planar body."""
    return P.area, P.perimeter


def minkowski_sum2d(P: Core2D, Q: Core2D) -> Core2D:
    """Minkowski sum of two convex polygons by merging edges by slope."""
    if isinstance(P, Degenerate2D) or isinstance(Q, Degenerate2D):
        sums = (P.vertices[:, None, :] + Q.vertices[None, :, :]).reshape(-1, 2)
        return convex_body(sums)

    def from_lowest(v):
        i = np.lexsort((v[:, 0], v[:, 1]))[0]
        return np.roll(v, -i, axis=0)

    a, b = from_lowest(P.vertices), from_lowest(Q.vertices)
    ea = np.roll(a, -1, axis=0) - a
    eb = np.roll(b, -1, axis=0) - b
    # edges leave the lowest vertex with polar angle in [0, 2pi)
    ang_a = np.mod(np.arctan2(ea[:, 1], ea[:, 0]), 2 * np.pi)
    ang_b = np.mod(np.arctan2(eb[:, 1], eb[:, 0]), 2 * np.pi)
    pts = [a[0] + b[0]]
    i = j = 0
    while i < len(ea) or j < len(eb):
        if j >= len(eb) or (i < len(ea) and ang_a[i] <= ang_b[j]):
            pts.append(pts[-1] + ea[i])
            i += 1
        else:
            pts.append(pts[-1] + eb[j])
            j += 1
    return convex_body(np.array(pts[:-1]))


def _clip(poly: np.ndarray, n: np.ndarray, b: float, eps: float) -> np.ndarray:
    """Sutherland-Hodgman clip of a convex cycle by ``n.x <= b``."""
    if len(poly) == 0:
        return poly
    d = poly @ n - b
    inside = d <= eps
    if inside.all():
        return poly
    if not inside.any():
        return poly[:0]
    out = []
    k = len(poly)
    for i in range(k):
        p, q = poly[i], poly[(i + 1) % k]
        dp, dq = d[i], d[(i + 1) % k]
        if dp <= eps:
            out.append(p)
        if (dp <= eps) != (dq <= eps):
            s = dp / (dp - dq)
            out.append(p + s * (q - p))
    return np.array(out).reshape(-1, 2)


def _inner_polygon(P: ConvexPolygon, t: float, tol: float = TAU):
    if t <= 0:
        return P
    n, b = P.halfplanes()
    eps = tol * max(1.0, float(np.abs(P.vertices).max()))
    poly = P.vertices
    for ni, bi in zip(n, b):
        poly = _clip(poly, ni, bi - t, eps)
        if len(poly) == 0:
            return None
    return convex_body(poly)


def inner_parallel_body(P: Body2D, t: float):
    """Points of ``P`` at distance at least ``t`` from its boundary.

    Returns a polygon, a rounded polygon (when ``P`` is rounded and
    ``t`` does not exceed its radius), a ``Degenerate2D`` point or
    segment, or ``None`` when empty.
    """
    if t < 0:
        raise ValueError("offset must be nonnegative")
    if isinstance(P, RoundedPolygon):
        if t <= P.radius:
            return RoundedPolygon(P.core, P.radius - t)
        return inner_parallel_body(P.core, t - P.radius)
    if isinstance(P, Degenerate2D):
        return P if t == 0 else None
    return _inner_polygon(P, t)


def inradius(P: Body2D) -> float:
    """Radius of the largest disc inside ``P`` (bisection to 1e-12)."""
    if isinstance(P, RoundedPolygon):
        return P.radius + (inradius(P.core) if isinstance(P.core, ConvexPolygon) else 0.0)
    if isinstance(P, Degenerate2D):
        return 0.0
    # r <= 2A/P for every convex body; emptiness is decided without slack
    lo, hi = 0.0, 2.0 * P.area / P.perimeter
    if _inner_polygon(P, hi, tol=0.0) is not None:
        return hi
    while hi - lo > 1e-13:
        mid = 0.5 * (lo + hi)
        if _inner_polygon(P, mid, tol=0.0) is None:
            hi = mid
        else:
            lo = mid
    return lo


def body_area(P) -> float:
    """Area of a planar body, with ``None`` (empty) giving 0."""
    return 0.0 if P is None else P.area


def regular_polygon(m: int, circumradius: float = 1.0, center=(0.0, 0.0)) -> ConvexPolygon:
    k = np.arange(m)
    ang = 2 * np.pi * k / m
    v = circumradius * np.column_stack([np.cos(ang), np.sin(ang)]) + np.asarray(center, dtype=float)
    return ConvexPolygon(v)


def unit_square() -> ConvexPolygon:
    return ConvexPolygon([[0, 0], [1, 0], [1, 1], [0, 1]])


def rectangle(w: float, h: float) -> ConvexPolygon:
    return ConvexPolygon([[0, 0], [w, 0], [w, h], [0, h]])


def arc_error(radius: float, m: int) -> float:
    """Hausdorff bound for replacing each rounded corner by ``m`` chords."""
    return radius * (1.0 - math.cos(math.pi / m))


def polygonize(R: Body2D, m: int = 64) -> ConvexPolygon:
    """Inscribed polygon approximating a rounded polygon.

    Every corner arc is replaced by ``m`` chords; a disc becomes a regular
    ``m``-gon. The Hausdorff error is at most ``arc_error(radius, m)``.
    """
    if isinstance(R, ConvexPolygon):
        return R
    if not isinstance(R, RoundedPolygon):
        raise DegenerateInput("cannot polygonize a point or segment")
    if R.radius == 0:
        if isinstance(R.core, ConvexPolygon):
            return R.core
        raise DegenerateInput("rounded body with zero radius and degenerate core")
    core, r = R.core, R.radius
    if isinstance(core, Degenerate2D) and core.is_point:
        return regular_polygon(m, r, core.vertices[0])
    v = core.vertices
    if len(v) == 2:
        d = v[1] - v[0]
        d = d / np.hypot(*d)
        nrm = np.array([d[1], -d[0]])
        n_in = [nrm, -nrm]
    else:
        e = np.roll(v, -1, axis=0) - v
        nrm = np.column_stack([e[:, 1], -e[:, 0]])
        nrm /= np.hypot(nrm[:, 0], nrm[:, 1])[:, None]
        n_in = list(nrm)
    k = len(v)
    pts = []
    for i in range(k):
        # arc at vertex i runs from the normal of edge i-1 to that of edge i
        a0 = math.atan2(n_in[i - 1][1], n_in[i - 1][0])
        a1 = math.atan2(n_in[i][1], n_in[i][0])
        sweep = (a1 - a0) % (2 * math.pi)
        if len(v) == 2:
            sweep = math.pi
        angs = a0 + sweep * np.arange(m + 1) / m
        pts.append(v[i] + r * np.column_stack([np.cos(angs), np.sin(angs)]))
    return hull2d(np.vstack(pts))


def support_directions(count: int = 4096) -> np.ndarray:
    ang = 2 * np.pi * np.arange(count) / count
    return np.column_stack([np.cos(ang), np.sin(ang)])


def hausdorff2d(A: Body2D, B: Body2D, count: int = 4096) -> float:
    """Hausdorff distance of two convex bodies via their support functions.

    Sampled on ``count`` uniform directions plus the edge normals of any
    polygonal parts, where the extremal difference is attained.
    """
    dirs = [support_directions(count)]
    for X in (A, B):
        core = X.core if isinstance(X, RoundedPolygon) else X
        if isinstance(core, ConvexPolygon):
            n, _ = core.halfplanes()
            dirs.append(n)
            # bisectors of vertex normal cones
            bis = n + np.roll(n, 1, axis=0)
            nb = np.hypot(bis[:, 0], bis[:, 1])
            dirs.append(bis[nb > 0] / nb[nb > 0, None])
    U = np.vstack(dirs)
    return float(np.max(np.abs(A.support(U) - B.support(U))))
