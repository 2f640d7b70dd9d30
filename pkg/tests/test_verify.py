import json
import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from canalgeo import constructions, geom2d, geom3d, verify
from canalgeo._tol import TAU, PreconditionViolated

from conftest import directions, polytopes

E1, E2, E3 = np.eye(3)
FIXTURES = Path(__file__).parent / "fixtures"


def k3():
    return geom3d.hull3d(constructions.K3_VERTICES)


def test_outcome_sign_conventions():
    o = verify._outcome("x", 1.0, 2.0, "le")
    assert o.slack == 1.0 and o.holds and o.as_expected
    o = verify._outcome("x", 1.0, 2.0, "ge")
    assert o.slack == -1.0 and not o.holds
    o = verify._outcome("x", 1.0, 1.0 + 1e-12, "eq")
    assert o.holds and not o.near_violation
    o = verify._outcome("x", 1.0, 1.0005, "le")
    assert o.holds and o.near_violation
    with pytest.raises(ValueError):
        verify._outcome("x", 1.0, 1.0, "lt")


def test_outcome_json_round_trip():
    o = verify.check_projection_ratio(geom3d.cube(), E3, seed=5)
    d = json.loads(o.to_json())
    assert d["name"] == "proj-ratio" and d["seed"] == 5 and d["as_expected"] is True
    assert d["inputs"]["K"]["type"] == "polytope3"


def test_projection_ratio_examples():
    o = verify.check_projection_ratio(geom3d.cube(), E3)
    assert o.lhs == pytest.approx(1 / 6) and o.rhs == pytest.approx(1 / 4) and o.holds
    o = verify.check_projection_ratio(constructions.build_AH(3, 83).polytope, E3)
    assert o.lhs == pytest.approx(0.2500082153, abs=1e-10)
    assert o.rhs == pytest.approx(0.25, abs=1e-15)
    assert not o.holds


def test_projection_ratio_over_disc_approximations():
    pool = {e.name: e for e in verify.projection_pool()}
    for name in ("disc-64", "disc-128"):
        entry = pool[name]
        assert entry.calibrable
        for i in range(100):
            o = verify.trial_proj_ratio(verify.trial_seed(11, i), projection=entry.body)
            assert o.slack >= -entry.cheeger_gap - TAU
            assert verify.calibrability_consistent(o)


def test_ghp_examples():
    o = verify.check_ghp(geom3d.cube(), E3)
    assert o.rhs == pytest.approx(1 / 3) and o.holds
    o = verify.check_ghp(constructions.build_AH(3, 83).polytope, E3)
    assert o.lhs == pytest.approx(0.2500082153, abs=1e-10) and o.holds
    assert verify.ghp_factor(3) == 4 / 3


def test_ghp_random_sweep():
    rng = np.random.default_rng(7)
    for i in range(1000):
        K = verify.random_polytope(verify.trial_seed(7, i), int(rng.integers(4, 25)), verify.PROFILES[i % 3])
        for _ in range(16):
            assert verify.check_ghp(K, verify.random_direction(rng)).holds


def test_ghp_sharp_profile_gets_close_to_the_bound():
    o = verify.check_ghp(verify.sharp_ghp_body(100.0, 1e6), E3)
    assert o.holds
    assert o.lhs / o.rhs > 0.999


def test_fgm_examples():
    sq = geom2d.unit_square()
    o = verify.check_fgm_2d(sq, sq)
    assert o.lhs == pytest.approx(0.5) and o.rhs == pytest.approx(0.5) and o.holds
    o = verify.check_fgm_2d(sq, geom2d.rectangle(1.0, 0.01))
    assert o.slack > 0


def test_fgm_random_pairs():
    rep = verify.search("fgm", 10_000, seed=3)
    assert not rep.violations


def test_linear_bm_examples():
    cube = geom3d.cube()
    o = verify.check_linear_bm(cube, cube, E3, 0.5)
    assert o.lhs == pytest.approx(o.rhs, rel=1e-12) and o.holds
    K = k3().linear_map(np.diag([math.sqrt(2), math.sqrt(2), 1.0]))
    assert geom3d.project_to_plane(K, E3).area == pytest.approx(2.0)
    big = geom3d.box(math.sqrt(2), math.sqrt(2), 1.0)
    for lam in (0.25, 0.5, 0.75):
        assert verify.check_linear_bm(big, K, E3, lam).holds
    for lam in (0.0, 1.0):
        o = verify.check_linear_bm(big, K, E3, lam)
        assert o.lhs == o.rhs


def test_linear_bm_preconditions():
    with pytest.raises(PreconditionViolated):
        verify.check_linear_bm(geom3d.cube(), k3(), E1, 0.5)
    with pytest.raises(PreconditionViolated):
        verify.check_linear_bm(geom3d.cube(), geom3d.cube(), E3, 1.5)


def test_thmD_examples():
    cube = geom3d.cube()
    o = verify.check_thmD(cube, cube, E3)
    assert o.lhs == pytest.approx(2.0) and o.rhs == pytest.approx(2.0) and o.holds
    o = verify.check_thmD(cube, cube.scale(2.0), E3)
    assert o.lhs == pytest.approx(o.rhs, rel=1e-12)
    # K3 sits over the same unit square as the cube
    o = verify.check_thmD(cube, k3(), E3)
    assert o.holds and o.slack > 1e-3


def test_thmD_requires_homothetic_projections():
    with pytest.raises(PreconditionViolated):
        verify.check_thmD(geom3d.cube(), geom3d.box(2, 1, 1), E3)


def test_thmD_random_pairs():
    rep = verify.search("thmD", 1000, seed=4)
    assert not rep.violations
    assert min(o.relative_slack for o in rep.outcomes) >= -1e-9


def test_eq18_failure():
    o = verify.check_eq18_failure(100)
    assert o.lhs <= 0.52 and o.rhs >= 2 / 3
    assert not o.holds and o.expect_failure and o.as_expected
    lo, hi = o.extra["bracket"]
    assert lo <= o.lhs <= hi
    assert o.extra["limit"] == pytest.approx(0.5)
    o = verify.check_eq18_failure(1000)
    assert abs(o.lhs - 0.5) < 0.002 and o.as_expected
    with pytest.raises(PreconditionViolated):
        verify.check_eq18_failure(1.5)


def test_eq18_single_body_terms():
    K = constructions.k3_normalized()
    assert verify._vol_over_proj(K, E1) == pytest.approx(2 / 3, rel=1e-12)
    L = geom3d.box(*constructions.lh_sides(3, 10.0, True))
    assert verify._vol_over_proj(L, E1) == pytest.approx(0.1, rel=1e-12)


@given(polytopes(), directions())
def test_segment_sum_identity(K, u):
    o = verify.check_segment_sum(K, u)
    assert o.holds
    assert abs(o.lhs - o.rhs) <= 1e-9 * max(1.0, o.rhs)


def test_random_polytope_fixture():
    K = verify.random_polytope(1, 4)
    ref = json.loads((FIXTURES / "random_polytope_seed1_v4.json").read_text())
    assert len(K.vertices) == 4 and len(K.facets) == 4
    assert np.array_equal(np.sort(K.vertices, axis=0), np.sort(np.array(ref["vertices"]), axis=0))


@settings(max_examples=20)
@given(st.integers(0, 2**63 - 1), st.integers(4, 30), st.sampled_from(verify.PROFILES))
def test_random_polytope_is_deterministic(seed, v, profile):
    a = verify.random_polytope(seed, v, profile)
    b = verify.random_polytope(seed, v, profile)
    assert np.array_equal(a.vertices, b.vertices)


def test_random_polytope_needs_four_points():
    with pytest.raises(PreconditionViolated):
        verify.random_polytope(1, 3)


def test_trial_seeds_are_distinct_and_stable():
    seeds = [verify.trial_seed(0, i) for i in range(1000)]
    assert len(set(seeds)) == 1000
    assert verify.trial_seed(0, 0) == seeds[0]


@pytest.mark.parametrize("check", sorted(verify.TRIALS))
def test_replay_reproduces_search_records(check):
    rep = verify.search(check, 5, seed=21)
    for i, o in enumerate(rep.outcomes):
        assert o.seed == verify.trial_seed(21, i)
        again = verify.replay(check, o.seed)
        assert again.to_json() == o.to_json()


def test_search_rejects_bad_requests():
    with pytest.raises(ValueError):
        verify.search("nope", 1, 0)
    with pytest.raises(ValueError):
        verify.search("ghp", -1, 0)


def test_search_summary_and_near_violations():
    rep = verify.search("ghp", 60, seed=9, profiles=("sharp",))
    s = rep.summary()
    assert s["trials"] == 60 and s["violations"] == 0
    assert s["near_violations"] == len(rep.near_violations) > 0
    assert all(o.holds and o.relative_slack < verify.NEAR_VIOLATION for o in rep.near_violations)


def test_calibrability_consistency_on_the_square():
    rep = verify.search("proj-ratio", 500, seed=7, projection=geom2d.unit_square())
    assert all(verify.calibrability_consistent(o) for o in rep.outcomes)
    assert all(not o.extra["calibrable"] for o in rep.violations)
