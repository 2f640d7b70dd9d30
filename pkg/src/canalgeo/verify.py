"""Inequality checks and seeded randomized searches.

Every check returns a :class:`CheckOutcome`. ``sense`` states the direction
of the inequality as written (``"le"``: lhs <= rhs, ``"ge"``: lhs >= rhs,
``"eq"``: identity) and ``slack`` is signed so that it is nonnegative exactly
when the inequality holds.

Searches derive one 64-bit seed per trial from ``(master_seed, index)``; a
trial replays from its name, seed and parameters alone.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np

from . import canal, cheeger, constructions, geom2d, geom3d
from .geom2d import ConvexPolygon
from .geom3d import ConvexPolytope3
from .serialize import body_to_dict, dumps
from ._tol import TAU, DegenerateInput, PreconditionViolated

NEAR_VIOLATION = 1e-3
PROFILES = ("sphere", "box", "aniso")
RETRIES = 16
E3 = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    lhs: float
    rhs: float
    slack: float
    holds: bool
    sense: str
    inputs: dict = field(default_factory=dict)
    seed: int | None = None
    expect_failure: bool = False
    extra: dict = field(default_factory=dict)

    @property
    def as_expected(self) -> bool:
        return self.holds != self.expect_failure

    @property
    def relative_slack(self) -> float:
        return self.slack / max(abs(self.lhs), abs(self.rhs), 1e-300)

    @property
    def near_violation(self) -> bool:
        return self.sense != "eq" and self.holds and self.relative_slack < NEAR_VIOLATION

    def to_dict(self) -> dict:
        d = asdict(self)
        d["as_expected"] = self.as_expected
        return d

    def to_json(self) -> str:
        return dumps(self.to_dict())


def _outcome(name, lhs, rhs, sense, inputs=None, seed=None, expect_failure=False, extra=None):
    lhs, rhs = float(lhs), float(rhs)
    if sense == "le":
        slack = rhs - lhs
    elif sense == "ge":
        slack = lhs - rhs
    elif sense == "eq":
        slack = -abs(lhs - rhs)
    else:
        raise ValueError(f"unknown sense {sense!r}")
    tol = TAU * max(1.0, abs(lhs), abs(rhs))
    return CheckOutcome(
        name, lhs, rhs, slack, slack >= -tol, sense,
        inputs or {}, seed, expect_failure, extra or {},
    )


def _proj_ratio(K: ConvexPolytope3, u) -> float:
    C = geom3d.project_to_plane(K, u)
    return C.area / C.perimeter


# -- single checks ---------------------------------------------------------


def check_projection_ratio(K: ConvexPolytope3, u=E3, seed=None, extra=None) -> CheckOutcome:
    """vol/surf of ``K`` against area/perimeter of its projection along ``u``."""
    return _outcome(
        "proj-ratio", K.volume / K.surface_area, _proj_ratio(K, u), "le",
        {"K": body_to_dict(K), "u": list(map(float, u))}, seed, extra=extra,
    )


def ghp_factor(n: int = 3) -> float:
    return 2.0 * (n - 1) / n


def check_ghp(K: ConvexPolytope3, u=E3, seed=None, extra=None) -> CheckOutcome:
    """vol/surf of ``K`` against ``4/3`` times its projection ratio."""
    return _outcome(
        "ghp", K.volume / K.surface_area, ghp_factor(3) * _proj_ratio(K, u), "le",
        {"K": body_to_dict(K), "u": list(map(float, u))}, seed, extra=extra,
    )


def _ratio2d(P) -> float:
    A, Per = geom2d.measure2d(P)
    return A / Per


def check_fgm_2d(P: ConvexPolygon, Q: ConvexPolygon, seed=None) -> CheckOutcome:
    """Superadditivity of area/perimeter under planar Minkowski addition."""
    S = geom2d.minkowski_sum2d(P, Q)
    return _outcome(
        "fgm", _ratio2d(S), _ratio2d(P) + _ratio2d(Q), "ge",
        {"P": body_to_dict(P), "Q": body_to_dict(Q)}, seed,
    )


def _combo(K: ConvexPolytope3, L: ConvexPolytope3, lam: float):
    """``(1 - lam) K + lam L``; a vanishing coefficient leaves the other body."""
    if lam == 0:
        return K
    if lam == 1:
        return L
    return geom3d.minkowski_sum3d((1 - lam) * K.vertices, lam * L.vertices)


def check_linear_bm(K: ConvexPolytope3, L: ConvexPolytope3, u=E3, lam: float = 0.5, seed=None) -> CheckOutcome:
    """Linear Brunn-Minkowski for bodies with equal projection areas along ``u``."""
    if not 0.0 <= lam <= 1.0:
        raise PreconditionViolated("lambda must lie in [0, 1]")
    a, b = geom3d.project_to_plane(K, u).area, geom3d.project_to_plane(L, u).area
    if abs(a - b) > TAU * max(a, b) * 10:
        raise PreconditionViolated(f"projection areas differ: {a!r} vs {b!r}")
    M = _combo(K, L, lam)
    return _outcome(
        "linear-bm", M.volume, (1 - lam) * K.volume + lam * L.volume, "ge",
        {"K": body_to_dict(K), "L": body_to_dict(L), "u": list(map(float, u)), "lambda": lam}, seed,
    )


HOMOTHETY_DIRECTIONS = 64
HOMOTHETY_RTOL = 1e-6


def homothety_defect(C: ConvexPolygon, D: ConvexPolygon, count: int = HOMOTHETY_DIRECTIONS) -> float:
    """Relative support-function gap after centring and scaling both to unit area."""
    dirs = geom2d.support_directions(count)
    hc = (C.support(dirs) - dirs @ C.centroid) / math.sqrt(C.area)
    hd = (D.support(dirs) - dirs @ D.centroid) / math.sqrt(D.area)
    return float(np.max(np.abs(hc - hd)) / np.max(np.abs(hc)))


def _vol_over_proj(K: ConvexPolytope3, u) -> float:
    return K.volume / geom3d.project_to_plane(K, u).area


def check_thmD(K: ConvexPolytope3, L: ConvexPolytope3, u=E3, seed=None) -> CheckOutcome:
    """vol/projarea is superadditive when the projections are homothetic."""
    d = homothety_defect(geom3d.project_to_plane(K, u), geom3d.project_to_plane(L, u))
    if d > HOMOTHETY_RTOL:
        raise PreconditionViolated(f"projections are not homothetic (defect {d:.3g})")
    S = geom3d.minkowski_sum3d(K, L)
    return _outcome(
        "thmD", _vol_over_proj(S, u), _vol_over_proj(K, u) + _vol_over_proj(L, u), "ge",
        {"K": body_to_dict(K), "L": body_to_dict(L), "u": list(map(float, u))}, seed,
    )


def check_eq18_failure(h: float) -> CheckOutcome:
    """Superadditivity of vol/projarea with equal projection areas only.

    Uses ``K`` = normalised ``K_3`` and ``L`` = the full-dimensional ``L_h``
    along ``u = e1``; both projections have area 1. The inequality is expected
    to fail for large ``h``, so ``expect_failure`` is set.
    """
    if h < 2:
        raise PreconditionViolated("h must be at least 2")
    K = constructions.k3_normalized()
    L = constructions.lh_points(h, tilde=True)
    u = np.array([1.0, 0.0, 0.0])
    S = geom3d.minkowski_sum3d(K, L)
    lhs = _vol_over_proj(S, u)
    rhs = _vol_over_proj(K, u) + (1.0 / h) / 1.0
    bracket = constructions.lh_bracket(K, h, tilde=True)
    return _outcome(
        "eq18", lhs, rhs, "ge", {"K": body_to_dict(K), "h": float(h), "u": [1.0, 0.0, 0.0]},
        expect_failure=True, extra={"bracket": bracket["ratio"], "limit": bracket["limit"]},
    )


def check_segment_sum(K: ConvexPolytope3, u=E3, seed=None) -> CheckOutcome:
    """vol/surf of ``K + [0, u]`` computed directly against the projection formula."""
    u = geom3d.direction(u)
    S = geom3d.minkowski_sum3d(K, np.array([np.zeros(3), u]))
    C = geom3d.project_to_plane(K, u)
    rhs = (K.volume + C.area) / (K.surface_area + C.perimeter)
    return _outcome(
        "segment-sum", S.volume / S.surface_area, rhs, "eq",
        {"K": body_to_dict(K), "u": u.tolist()}, seed,
    )


# -- random generators -----------------------------------------------------


def trial_seed(master: int, index: int) -> int:
    return int(np.random.SeedSequence([int(master), int(index)]).generate_state(1, np.uint64)[0])


def _sample(rng: np.random.Generator, v: int, profile: str) -> np.ndarray:
    if profile == "sphere":
        x = rng.standard_normal((v, 3))
        return x / np.linalg.norm(x, axis=1, keepdims=True)
    if profile == "box":
        return rng.uniform(-1.0, 1.0, (v, 3))
    if profile == "aniso":
        scales = 10.0 ** rng.uniform(-1.0, 1.0, 3)
        R = geom3d.rotation(rng.standard_normal(3), rng.uniform(0, 2 * math.pi))
        return (rng.standard_normal((v, 3)) * scales) @ R.T
    raise ValueError(f"unknown profile {profile!r}")


def random_polytope(seed: int, v: int = 12, profile: str = "sphere") -> ConvexPolytope3:
    """Hull of ``v`` seeded samples; degenerate draws are retried."""
    if v < 4:
        raise PreconditionViolated("a random polytope needs at least 4 points")
    rng = np.random.default_rng(seed)
    for _ in range(RETRIES):
        try:
            return geom3d.hull3d(_sample(rng, v, profile))
        except DegenerateInput:
            continue
    raise DegenerateInput(f"{RETRIES} degenerate draws in a row")


def random_polygon(rng: np.random.Generator, k: int | None = None) -> ConvexPolygon:
    """Hull of seeded points in a random ellipse; at least 3 vertices."""
    for _ in range(RETRIES):
        kk = k if k is not None else int(rng.integers(3, 13))
        ang = rng.uniform(0, 2 * math.pi, kk)
        rad = np.sqrt(rng.uniform(0.05, 1.0, kk))
        pts = np.column_stack([rad * np.cos(ang), rad * np.sin(ang)])
        pts *= [1.0, 10.0 ** rng.uniform(-1.5, 0.0)]
        t = rng.uniform(0, math.pi)
        c, s = math.cos(t), math.sin(t)
        pts = pts @ np.array([[c, s], [-s, c]]) + rng.uniform(-1, 1, 2)
        try:
            return geom2d.hull2d(pts)
        except DegenerateInput:
            continue
    raise DegenerateInput(f"{RETRIES} degenerate polygons in a row")


def random_direction(rng: np.random.Generator) -> np.ndarray:
    x = rng.standard_normal(3)
    return x / np.linalg.norm(x)


def _random_rotation(rng: np.random.Generator) -> np.ndarray:
    q = rng.standard_normal(4)
    a, b, c, d = q / np.linalg.norm(q)
    return np.array([
        [a*a + b*b - c*c - d*d, 2*(b*c - a*d), 2*(b*d + a*c)],
        [2*(b*c + a*d), a*a - b*b + c*c - d*d, 2*(c*d - a*b)],
        [2*(b*d - a*c), 2*(c*d + a*b), a*a - b*b - c*c + d*d],
    ])


def sharp_ghp_body(h: float, lam: float) -> ConvexPolytope3:
    """Join over the thin triangle ``conv{0, h^2 e1, e2}`` with its truncation at ``x = h``, stretched along e3.

    Its ratio approaches the ``4/3`` bound as ``h`` and ``lam`` grow.
    """
    C, D = constructions.build_pyramid(2, h)
    return geom3d.dilate_along(canal.join_body(C.polygon, D.polygon), E3, lam)


# -- trials ---------------------------------------------------------------


def trial_ghp(seed: int, profiles=PROFILES) -> CheckOutcome:
    rng = np.random.default_rng(seed)
    profile = profiles[int(rng.integers(len(profiles)))]
    if profile == "sharp":
        h = 10.0 ** rng.uniform(1.5, 2.5)
        lam = 10.0 ** rng.uniform(3.0, 6.0)
        R = _random_rotation(rng)
        K, u = sharp_ghp_body(h, lam).linear_map(R), R @ E3
    else:
        v = int(rng.integers(4, 25))
        K = random_polytope(int(rng.integers(2**63)), v, profile)
        u = random_direction(rng)
    return check_ghp(K, u, seed, extra={"profile": profile})


def trial_fgm(seed: int) -> CheckOutcome:
    rng = np.random.default_rng(seed)
    return check_fgm_2d(random_polygon(rng), random_polygon(rng), seed)


@dataclass(frozen=True, eq=False)
class PoolEntry:
    name: str
    body: ConvexPolygon
    calibration: float
    cheeger_gap: float
    t_star: float
    calibrable: bool


def _pool_entry(name: str, C: ConvexPolygon) -> PoolEntry:
    res = cheeger.cheeger_2d(C)
    d = geom2d.hausdorff2d(C, res.cheeger_set)
    gap = res.t_star - C.area / C.perimeter
    return PoolEntry(name, C, d, gap, res.t_star, d <= 1e-3 * C.diameter())


@lru_cache(maxsize=None)
def projection_pool(size: int = 24) -> tuple[PoolEntry, ...]:
    """Fixed planar bodies: named shapes, disc approximations and seeded random polygons."""
    named = {
        "unit-square": geom2d.unit_square(),
        "triangle": geom2d.hull2d([[0, 0], [4, 0], [0, 3]]),
        "thin-rect": geom2d.rectangle(1.0, 0.01),
        "hexagon": geom2d.regular_polygon(6),
        "disc-32": geom2d.regular_polygon(32),
        "disc-64": geom2d.regular_polygon(64),
        "disc-128": geom2d.regular_polygon(128),
    }
    entries = [_pool_entry(k, v) for k, v in named.items()]
    rng = np.random.default_rng(2024)
    for i in range(size):
        entries.append(_pool_entry(f"random-{i}", random_polygon(rng)))
    return tuple(entries)


def random_canal_body(C: ConvexPolygon, rng: np.random.Generator, t_star: float | None = None) -> ConvexPolytope3:
    """Seeded body whose projection along e3 is exactly ``C``.

    Either the join of ``C`` with a polygonised opening of ``C`` one unit
    higher, or the hull of ``C``'s vertices at random heights together with
    random points of the cylinder over ``C``; then stretched along e3.
    """
    if rng.uniform() < 0.5:
        if t_star is None:
            t_star = cheeger.cheeger_2d(C).t_star
        t = t_star * (1.0 if rng.uniform() < 0.3 else rng.uniform(0.2, 1.0))
        core = geom2d.inner_parallel_body(C, t)
        B = geom2d.polygonize(geom2d.RoundedPolygon(core, t), 8)
        K = canal.join_body(C, B)
    else:
        v = C.vertices
        z0 = rng.uniform(0.0, 0.5, len(v))
        z1 = z0 + rng.uniform(0.0, 1.0, len(v))
        w = rng.dirichlet(np.ones(len(v)), size=int(rng.integers(0, 8)))
        inner = np.column_stack([w @ v, rng.uniform(0.0, 1.5, len(w))])
        K = geom3d.hull3d(np.vstack([np.c_[v, z0], np.c_[v, z1], inner]))
    return geom3d.dilate_along(K, E3, 10.0 ** rng.uniform(0.0, 4.0))


def trial_proj_ratio(seed: int, projection: ConvexPolygon | None = None) -> CheckOutcome:
    rng = np.random.default_rng(seed)
    if projection is None:
        pool = projection_pool()
        entry = pool[int(rng.integers(len(pool)))]
    else:
        entry = _cached_entry(projection)
    K = random_canal_body(entry.body, rng, entry.t_star)
    R = _random_rotation(rng)
    info = {
        "projection": entry.name,
        "calibration": entry.calibration,
        "cheeger_gap": entry.cheeger_gap,
        "calibrable": entry.calibrable,
    }
    return check_projection_ratio(K.linear_map(R), R @ E3, seed, extra=info)


_ENTRY_CACHE: dict = {}


def _cached_entry(C: ConvexPolygon) -> PoolEntry:
    key = C.vertices.tobytes()
    if key not in _ENTRY_CACHE:
        _ENTRY_CACHE[key] = _pool_entry("custom", C)
    return _ENTRY_CACHE[key]


def _homothetic_partner(K: ConvexPolytope3, u, rng: np.random.Generator) -> ConvexPolytope3:
    """A body whose projection along ``u`` is a random homothet of ``K``'s."""
    C = geom3d.project_to_plane(K, u)
    s = 10.0 ** rng.uniform(-1.0, 1.0)
    t = rng.uniform(-2, 2, 2)
    base = (s * C.vertices + t) @ geom3d.plane_basis(u)
    u = geom3d.direction(u)
    k = len(base)
    lo = rng.uniform(-1, 1, k)
    hi = lo + rng.uniform(0.0, 2.0, k)
    return geom3d.hull3d(np.vstack([base + lo[:, None] * u, base + hi[:, None] * u]))


def trial_thmD(seed: int) -> CheckOutcome:
    rng = np.random.default_rng(seed)
    profile = PROFILES[int(rng.integers(len(PROFILES)))]
    K = random_polytope(int(rng.integers(2**63)), int(rng.integers(4, 16)), profile)
    u = random_direction(rng)
    return check_thmD(K, _homothetic_partner(K, u, rng), u, seed)


def trial_segment_sum(seed: int) -> CheckOutcome:
    rng = np.random.default_rng(seed)
    profile = PROFILES[int(rng.integers(len(PROFILES)))]
    K = random_polytope(int(rng.integers(2**63)), int(rng.integers(4, 20)), profile)
    return check_segment_sum(K, random_direction(rng), seed)


def trial_linear_bm(seed: int) -> CheckOutcome:
    rng = np.random.default_rng(seed)
    K = random_polytope(int(rng.integers(2**63)), int(rng.integers(4, 12)), "box")
    L = random_polytope(int(rng.integers(2**63)), int(rng.integers(4, 12)), "sphere")
    u = random_direction(rng)
    s = math.sqrt(geom3d.project_to_plane(K, u).area / geom3d.project_to_plane(L, u).area)
    M = s * np.eye(3) + (1.0 - s) * np.outer(u, u)
    return check_linear_bm(K, L.linear_map(M), u, float(rng.uniform()), seed)


TRIALS = {
    "ghp": trial_ghp,
    "fgm": trial_fgm,
    "proj-ratio": trial_proj_ratio,
    "thmD": trial_thmD,
    "segment-sum": trial_segment_sum,
    "linear-bm": trial_linear_bm,
}


def replay(name: str, seed: int, **params) -> CheckOutcome:
    return TRIALS[name](seed, **params)


@dataclass(frozen=True, eq=False)
class SearchReport:
    check: str
    master_seed: int
    outcomes: list

    @property
    def trials(self) -> int:
        return len(self.outcomes)

    @property
    def violations(self) -> list:
        return [o for o in self.outcomes if not o.holds]

    @property
    def near_violations(self) -> list:
        return [o for o in self.outcomes if o.near_violation]

    def summary(self) -> dict:
        return {
            "check": self.check,
            "seed": self.master_seed,
            "trials": self.trials,
            "violations": len(self.violations),
            "near_violations": len(self.near_violations),
            "min_relative_slack": min((o.relative_slack for o in self.outcomes), default=math.nan),
        }


def search(check: str, trials: int, seed: int, **params) -> SearchReport:
    """Run ``trials`` independent seeded trials of ``check``; outcomes are in trial order."""
    if check not in TRIALS:
        raise ValueError(f"unknown check {check!r}; choose from {sorted(TRIALS)}")
    if trials < 0:
        raise ValueError("trials must be nonnegative")
    fn = TRIALS[check]
    outs = [fn(trial_seed(seed, i), **params) for i in range(trials)]
    return SearchReport(check, int(seed), outs)


def calibrability_consistent(o: CheckOutcome) -> bool:
    """A projection-ratio violation is allowed only over a non-calibrable projection,
    or within the Cheeger gap of a calibrable approximation."""
    if o.holds:
        return True
    info = o.extra
    if not info.get("calibrable", False):
        return True
    return o.slack >= -info["cheeger_gap"] - TAU
