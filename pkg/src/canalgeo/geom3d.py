"""Convex polytopes in three dimensions.

A ``ConvexPolytope3`` keeps both representations: its vertex array and a
tuple of facets, each with a unit outward normal, an offset and the
counterclockwise (seen from outside) cycle of vertex indices. Coplanar hull
triangles are merged into polygonal facets and points lying inside facets or
on edges are never vertices, so the Euler relation holds exactly.

Hull construction delegates triangle enumeration to Qhull (via scipy); facet
merging, clipping, slicing and all measures are computed here.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import ConvexHull, QhullError, cKDTree

from . import geom2d
from ._tol import TAU, DegenerateInput, ScaleLimit

#: Default cap on |V(K)| * |V(L)| for Minkowski sums.
MINKOWSKI_CAP = 10**6


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


def _cross(a, b) -> np.ndarray:
    """Row-wise cross product; much cheaper than ``np.cross`` for small inputs."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return np.stack([
        a[..., 1] * b[..., 2] - a[..., 2] * b[..., 1],
        a[..., 2] * b[..., 0] - a[..., 0] * b[..., 2],
        a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0],
    ], axis=-1)


def direction(u) -> np.ndarray:
    """Normalise ``u`` to a unit 3-vector."""
    u = np.asarray(u, dtype=float).reshape(3)
    n = np.linalg.norm(u)
    if n == 0:
        raise ValueError("direction must be nonzero")
    return u / n


def plane_basis(u) -> np.ndarray:
    """Deterministic orthonormal basis of the plane orthogonal to ``u``.

    The first axis is ``e3 x u`` when ``|u . e3| < 0.9`` and the component
    of ``e1`` orthogonal to ``u`` otherwise; the second is ``u x first``, so
    ``(first, second, u)`` is right-handed. For ``u = e3`` the basis is
    ``(e1, e2)`` and projected coordinates are plain ``(x, y)``. Returns a
    ``(2, 3)`` array.
    """
    u = direction(u)
    if abs(u[2]) < 0.9:
        a = _cross(np.array([0.0, 0.0, 1.0]), u)
    else:
        a = np.array([1.0, 0.0, 0.0]) - u[0] * u
    a /= np.linalg.norm(a)
    b = _cross(u, a)
    return np.array([a, b])


@dataclass(frozen=True, eq=False)
class Facet:
    normal: np.ndarray
    offset: float
    cycle: tuple

    def points(self, vertices: np.ndarray) -> np.ndarray:
        return vertices[list(self.cycle)]

    def area(self, vertices: np.ndarray) -> float:
        p = self.points(vertices)
        d = p[1:] - p[0]
        s = _cross(d[:-1], d[1:]).sum(axis=0)
        return 0.5 * abs(float(s @ self.normal))


@dataclass(frozen=True, eq=False)
class ConvexPolytope3:
    """Full-dimensional convex polytope in R^3."""

    vertices: np.ndarray
    facets: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", _frozen(self.vertices))
        object.__setattr__(self, "facets", tuple(self.facets))
        pairs = set()
        for f in self.facets:
            cyc = f.cycle
            for i in range(len(cyc)):
                a, b = cyc[i], cyc[(i + 1) % len(cyc)]
                pairs.add((min(a, b), max(a, b)))
        object.__setattr__(self, "_edges", np.array(sorted(pairs), dtype=int).reshape(-1, 2))

    @cached_property
    def facet_areas(self) -> np.ndarray:
        return _frozen([f.area(self.vertices) for f in self.facets])

    @cached_property
    def normals(self) -> np.ndarray:
        return _frozen([f.normal for f in self.facets])

    @cached_property
    def offsets(self) -> np.ndarray:
        return _frozen([f.offset for f in self.facets])

    @property
    def volume(self) -> float:
        # cone decomposition from an interior reference point
        c = self.vertices.mean(axis=0)
        heights = self.offsets - self.normals @ c
        return float(heights @ self.facet_areas) / 3.0

    @property
    def surface_area(self) -> float:
        return float(self.facet_areas.sum())

    def edges(self) -> np.ndarray:
        """``(E, 2)`` array of vertex index pairs."""
        return self._edges

    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges()) + len(self.facets)

    def support(self, u):
        vals = np.max(np.asarray(u, dtype=float) @ self.vertices.T, axis=-1)
        return float(vals) if np.ndim(vals) == 0 else vals

    def scale_length(self) -> float:
        return max(1.0, float(np.abs(self.vertices).max()))

    def translate(self, t) -> "ConvexPolytope3":
        t = np.asarray(t, dtype=float)
        facets = [Facet(f.normal, f.offset + float(f.normal @ t), f.cycle) for f in self.facets]
        return ConvexPolytope3(self.vertices + t, facets)

    def linear_map(self, M) -> "ConvexPolytope3":
        """Image under an invertible linear map, keeping the combinatorics."""
        M = np.asarray(M, dtype=float)
        det = np.linalg.det(M)
        if abs(det) < 1e-300:
            raise DegenerateInput("linear map is singular")
        V = self.vertices @ M.T
        N = self.normals @ np.linalg.inv(M)
        N /= np.linalg.norm(N, axis=1)[:, None]
        facets = []
        for f, n in zip(self.facets, N):
            cyc = f.cycle if det > 0 else tuple(reversed(f.cycle))
            facets.append(Facet(n, float(np.mean(V[list(cyc)] @ n)), cyc))
        return ConvexPolytope3(V, facets)

    def scale(self, s: float) -> "ConvexPolytope3":
        if s <= 0:
            raise ValueError("scale factor must be positive")
        return self.linear_map(s * np.eye(3))

    def contains(self, x, tol: float = TAU) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(self.normals @ x <= self.offsets + tol * self.scale_length()))

    def validate(self, tol: float = TAU) -> None:
        """Raise ``AssertionError`` if a stored invariant is broken."""
        eps = tol * self.scale_length() * 10
        V = self.vertices
        assert np.all(V @ self.normals.T <= self.offsets + eps)
        for f in self.facets:
            p = f.points(V)
            assert np.all(np.abs(p @ f.normal - f.offset) <= eps)
        assert self.euler_characteristic() == 2
        assert self.volume > 0


def _affine_rank(pts: np.ndarray, tol: float) -> int:
    c = pts - pts.mean(axis=0)
    s = np.linalg.svd(c, compute_uv=False)
    scale = max(1.0, float(np.abs(pts).max()))
    return int(np.sum(s > tol * scale * max(1, len(pts)) ** 0.5))


def _snap(pts: np.ndarray, eps: float) -> np.ndarray:
    """One representative per cluster of points closer than ``eps``."""
    pairs = cKDTree(pts).query_pairs(eps, output_type="ndarray")
    if not len(pairs):
        return pts
    n = len(pts)
    graph = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(n, n))
    _, label = connected_components(graph, directed=False)
    _, first = np.unique(label, return_index=True)
    return pts[np.sort(first)]


def _boundary_cycle(tris: list) -> list | None:
    """Boundary loop of an oriented triangle patch, or ``None`` unless it is one loop."""
    directed = {(t[i], t[(i + 1) % 3]) for t in tris for i in range(3)}
    nxt = {}
    for a, b in directed:
        if (b, a) not in directed:
            if a in nxt:
                return None
            nxt[a] = b
    if not nxt:
        return None
    start = next(iter(nxt))
    cyc = [start]
    while nxt[cyc[-1]] != start:
        cyc.append(nxt[cyc[-1]])
        if len(cyc) > len(nxt):
            return None
    return cyc if len(cyc) == len(nxt) else None


def hull3d(points, tol: float = TAU) -> ConvexPolytope3:
    """Convex hull of a 3D point cloud with merged polygonal facets.

    Qhull's triangulated surface is partitioned into patches of coplanar
    triangles (within ``tol`` of the plane of the patch's largest triangle,
    which also supplies the facet normal); each facet is the boundary loop of a patch, so adjacent facets
    share edges exactly. Vertices met by only two facets lie on an edge and
    are dropped from both; patches left with fewer than three vertices go.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    if len(pts) < 4 or _affine_rank(pts, tol) < 3:
        raise DegenerateInput("points have affine dimension < 3")
    scale = max(1.0, float(np.abs(pts).max()))
    eps = tol * scale
    pts = _snap(pts, eps)
    try:
        qh = ConvexHull(pts)
    except QhullError as exc:
        raise DegenerateInput(str(exc)) from exc
    simp, eqs = qh.simplices.copy(), qh.equations
    # orient every triangle outward
    tn = _cross(pts[simp[:, 1]] - pts[simp[:, 0]], pts[simp[:, 2]] - pts[simp[:, 0]])
    flip = np.einsum("ij,ij->i", tn, eqs[:, :3]) < 0
    simp[flip] = simp[flip][:, ::-1]
    tri_area = 0.5 * np.linalg.norm(tn, axis=1)
    # grow each patch from its largest triangle, admitting neighbours whose
    # vertices sit within eps of the seed plane; no drift along chains
    taken = [False] * len(simp)
    nbrs = qh.neighbors.tolist()
    eq_list, plist, tris = eqs.tolist(), pts.tolist(), simp.tolist()
    cycles, normals = [], []
    for seed in np.argsort(-tri_area, kind="stable").tolist():
        if taken[seed]:
            continue
        taken[seed] = True
        nx, ny, nz, d = eq_list[seed]
        members, stack = [seed], [seed]
        while stack:
            for nb in nbrs[stack.pop()]:
                if taken[nb]:
                    continue
                e = eq_list[nb]
                if e[0] * nx + e[1] * ny + e[2] * nz <= 0:
                    continue
                if all(abs(x * nx + y * ny + z * nz + d) <= eps for x, y, z in (plist[i] for i in tris[nb])):
                    taken[nb] = True
                    members.append(nb)
                    stack.append(nb)
        cyc = _boundary_cycle([tris[t] for t in members])
        if cyc is None:
            cycles.extend(tris[t] for t in members)
            normals.extend(eqs[members, :3])
        else:
            cycles.append(cyc)
            normals.append(eqs[seed, :3])
    # a sliver patch can collapse to an edge once its edge vertices go; repeat until stable
    while True:
        degree = np.zeros(len(pts), dtype=int)
        for cyc in cycles:
            degree[cyc] += 1
        kept = [[i for i in cyc if degree[i] > 2] for cyc in cycles]
        live = [j for j, c in enumerate(kept) if len(c) >= 3]
        if len(live) == len(cycles) and all(len(c) == len(kept[j]) for j, c in enumerate(cycles)):
            break
        cycles = [kept[j] for j in live]
        normals = [normals[j] for j in live]
    used = sorted({i for cyc in cycles for i in cyc})
    remap = {old: new for new, old in enumerate(used)}
    V = pts[used]
    facets = []
    for cyc, n in zip(cycles, normals):
        new = tuple(remap[i] for i in cyc)
        facets.append(Facet(_frozen(n), float(np.mean(V[list(new)] @ n)), new))
    return ConvexPolytope3(V, facets)


def measure3d(K: ConvexPolytope3) -> tuple[float, float]:
    """``(volume, surface_area)``."""
    return K.volume, K.surface_area


def _edge_crossings(K: ConvexPolytope3, d: np.ndarray, eps: float) -> np.ndarray:
    E = K.edges()
    da, db = d[E[:, 0]], d[E[:, 1]]
    hit = ((da < -eps) & (db > eps)) | ((da > eps) & (db < -eps))
    a, b = E[hit, 0], E[hit, 1]
    s = (da[hit] / (da[hit] - db[hit]))[:, None]
    V = K.vertices
    return V[a] + s * (V[b] - V[a])


def halfspace_cut(K: ConvexPolytope3, normal, offset: float):
    """``K`` intersected with ``{x : <x, normal> <= offset}``; ``None`` if empty
    or lower-dimensional."""
    n = np.asarray(normal, dtype=float)
    nn = np.linalg.norm(n)
    n, offset = n / nn, offset / nn
    eps = TAU * K.scale_length()
    d = K.vertices @ n - offset
    if np.all(d <= eps):
        return K
    if np.all(d >= -eps):
        return None
    pts = [K.vertices[d <= eps], _edge_crossings(K, d, eps)]
    try:
        return hull3d(np.vstack(pts))
    except DegenerateInput:
        return None


def project_to_plane(K: ConvexPolytope3, u) -> geom2d.ConvexPolygon:
    """Orthogonal projection onto ``u``-perp, in ``plane_basis(u)`` coordinates."""
    return geom2d.hull2d(K.vertices @ plane_basis(u).T)


def slice(K: ConvexPolytope3, u, h: float):
    """Section ``K ∩ {<x, u> = h}`` in ``plane_basis(u)`` coordinates.

    Returns a polygon, a ``Degenerate2D`` point/segment, or ``None``.
    """
    u = direction(u)
    eps = TAU * K.scale_length()
    d = K.vertices @ u - h
    on = K.vertices[np.abs(d) <= eps]
    pts = np.vstack([on, _edge_crossings(K, d, eps)])
    if len(pts) == 0:
        return None
    return geom2d.convex_body(pts @ plane_basis(u).T)


def height_range(K: ConvexPolytope3, u) -> tuple[float, float]:
    h = K.vertices @ direction(u)
    return float(h.min()), float(h.max())


def slice_perimeter_integral(K: ConvexPolytope3, u) -> float:
    """Integral over heights of the perimeter of the sections orthogonal to ``u``.

    Each facet contributes its area times the sine of the angle between its
    normal and ``u``.
    """
    sines = np.linalg.norm(_cross(K.normals, direction(u)), axis=1)
    return float(sines @ K.facet_areas)


def dilate_along(K: ConvexPolytope3, u, lam: float) -> ConvexPolytope3:
    """Apply ``x -> x + (lam - 1) <x, u> u``."""
    if lam <= 0:
        raise ValueError("dilation factor must be positive")
    if lam < 1:
        warnings.warn("dilation factor below 1 shrinks along u", stacklevel=2)
    u = direction(u)
    return K.linear_map(np.eye(3) + (lam - 1.0) * np.outer(u, u))


def _as_points(X) -> np.ndarray:
    if isinstance(X, ConvexPolytope3):
        return X.vertices
    return np.asarray(X, dtype=float).reshape(-1, 3)


def minkowski_sum3d(K, L, cap: int = MINKOWSKI_CAP) -> ConvexPolytope3:
    """Minkowski sum via the hull of pairwise vertex sums.

    Either summand may be a polytope or a lower-dimensional body given as an
    array of points (a point, a segment, a planar polygon).
    """
    A, B = _as_points(K), _as_points(L)
    if len(A) * len(B) > cap:
        raise ScaleLimit(f"{len(A)} x {len(B)} vertex sums exceed cap {cap}")
    return hull3d((A[:, None, :] + B[None, :, :]).reshape(-1, 3))


def box(a: float = 1.0, b: float = 1.0, c: float = 1.0, origin=(0.0, 0.0, 0.0)) -> ConvexPolytope3:
    o = np.asarray(origin, dtype=float)
    pts = [[x, y, z] for x in (0, a) for y in (0, b) for z in (0, c)]
    return hull3d(np.array(pts, dtype=float) + o)


def cube() -> ConvexPolytope3:
    return box()


def prism(C: geom2d.ConvexPolygon, h: float) -> ConvexPolytope3:
    """Right prism ``C x [0, h]`` with ``C`` in the xy-plane."""
    v = C.vertices
    lo = np.column_stack([v, np.zeros(len(v))])
    hi = np.column_stack([v, np.full(len(v), float(h))])
    return hull3d(np.vstack([lo, hi]))


def lift(C, z: float = 0.0) -> np.ndarray:
    """Vertices of a planar body placed at height ``z`` in the xy-plane."""
    v = C.vertices
    return np.column_stack([v, np.full(len(v), float(z))])


def sections_quadrature(K: ConvexPolytope3, u, n: int = 10_000) -> tuple[float, float]:
    """Midpoint-rule integrals of section area and section perimeter.

    An independent route to the volume and to ``slice_perimeter_integral``.
    """
    lo, hi = height_range(K, u)
    dh = (hi - lo) / n
    area = perim = 0.0
    for i in range(n):
        S = slice(K, u, lo + (i + 0.5) * dh)
        if S is not None:
            area += S.area
            perim += S.perimeter
    return area * dh, perim * dh


def rotation(axis, angle: float) -> np.ndarray:
    """Rodrigues rotation matrix."""
    k = direction(axis)
    Kx = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    return np.eye(3) + math.sin(angle) * Kx + (1 - math.cos(angle)) * Kx @ Kx
