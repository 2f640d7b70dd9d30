import math

import numpy as np
import pytest
from hypothesis import given, settings

from canalgeo import cheeger, geom2d
from canalgeo.geom2d import Degenerate2D, RoundedPolygon, Segment1D
from canalgeo._tol import DegenerateInput

from conftest import polygons
import oracles

SQUARE_T = 1 / (2 + math.sqrt(math.pi))
TRI = [[0, 0], [4, 0], [0, 3]]


def unit_disc():
    return RoundedPolygon(Degenerate2D([[0.0, 0.0]]), 1.0)


def test_unit_square_root():
    res = cheeger.cheeger_2d(geom2d.unit_square())
    assert res.t_star == pytest.approx(SQUARE_T, abs=1e-12)
    # the root of (1 - 2t)^2 = pi t^2
    assert (1 - 2 * res.t_star) ** 2 == pytest.approx(math.pi * res.t_star**2, abs=1e-12)
    assert res.cheeger_set.radius == pytest.approx(SQUARE_T, abs=1e-12)
    assert res.core.area == pytest.approx((1 - 2 * SQUARE_T) ** 2, abs=1e-12)
    assert res.ratio == pytest.approx(res.t_star, abs=1e-10)
    assert res.residual <= 1e-12


def test_unit_square_pixel_oracle():
    t = oracles.pixel_cheeger(geom2d.unit_square().vertices, pixels=2000)
    assert t == pytest.approx(SQUARE_T, abs=1e-3)


def test_triangle_pixel_oracle():
    res = cheeger.cheeger_2d(geom2d.hull2d(TRI))
    assert res.t_star > 0.5
    assert res.t_star == pytest.approx(oracles.pixel_cheeger(np.array(TRI, float), pixels=2000), abs=1e-3)
    assert res.residual <= 1e-12


def test_disc_is_its_own_cheeger_set():
    res = cheeger.cheeger_2d(unit_disc())
    assert res.t_star == pytest.approx(0.5, abs=1e-12)
    assert res.cheeger_set.radius == pytest.approx(1.0, abs=1e-12)
    assert cheeger.is_cheeger_set(unit_disc())


def test_is_cheeger_set_examples():
    sq = geom2d.unit_square()
    assert not cheeger.is_cheeger_set(sq)
    assert cheeger.calibration_distance(sq) == pytest.approx(SQUARE_T * (math.sqrt(2) - 1), rel=1e-9)
    cs = cheeger.cheeger_2d(sq).cheeger_set
    assert cheeger.is_cheeger_set(cs, tol=1e-9)
    assert cheeger.is_cheeger_set(cs)


def test_zero_area_is_degenerate():
    with pytest.raises(DegenerateInput):
        cheeger.cheeger_2d(Degenerate2D([[0.0, 0.0], [1.0, 0.0]]))


def test_cheeger_1d():
    assert cheeger.cheeger_1d(Segment1D(1.0)) == 0.5
    assert cheeger.cheeger_1d(Segment1D(2.0)) == 1.0
    assert cheeger.cheeger_ratio(Segment1D(3.0)) == 1.5
    with pytest.raises(DegenerateInput):
        cheeger.cheeger_1d(Segment1D(0.0))


def test_bracketing_and_monotone_gap():
    for P in (geom2d.unit_square(), geom2d.hull2d(TRI), geom2d.regular_polygon(7)):
        r = geom2d.inradius(P)
        assert cheeger.area_gap(P, 0.0) > 0 >= cheeger.area_gap(P, r)
        g = [cheeger.area_gap(P, t) for t in np.linspace(0, r, 50)]
        assert np.all(np.diff(g) < 0)


def test_random_subpolygons_stay_below_t_star(rng):
    C = geom2d.hull2d(TRI)
    t = cheeger.cheeger_2d(C).t_star
    best = 0.0
    for _ in range(1000):
        # random convex combinations of the vertices are interior points
        w = rng.dirichlet(np.ones(3), size=rng.integers(3, 12))
        try:
            B = geom2d.hull2d(w @ C.vertices)
        except DegenerateInput:
            continue
        best = max(best, B.area / B.perimeter)
    assert best <= t + 1e-9


@given(polygons())
def test_fixed_point(P):
    res = cheeger.cheeger_2d(P)
    again = cheeger.cheeger_2d(res.cheeger_set)
    assert again.t_star == pytest.approx(res.t_star, abs=1e-9 * max(1.0, res.t_star))


@given(polygons())
def test_area_equation_and_ratio(P):
    res = cheeger.cheeger_2d(P)
    scale = max(1.0, P.area)
    assert res.residual <= 1e-12 * scale
    assert res.t_star >= P.area / P.perimeter
    assert res.ratio == pytest.approx(res.t_star, rel=1e-10)


@settings(max_examples=15)
@given(polygons())
def test_scaling_covariance(P):
    t = cheeger.cheeger_2d(P).t_star
    for s in (0.5, 2.0, 10.0):
        assert cheeger.cheeger_2d(P.scale(s)).t_star == pytest.approx(s * t, rel=1e-9)
