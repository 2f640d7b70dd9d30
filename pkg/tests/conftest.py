import os
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, assume, settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from canalgeo import geom2d, verify  # noqa: E402
from canalgeo._tol import DegenerateInput  # noqa: E402

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=400, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

coord = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


@st.composite
def polygons(draw, min_area=1e-2):
    pts = draw(st.lists(st.tuples(coord, coord), min_size=3, max_size=12))
    try:
        P = geom2d.hull2d(np.array(pts))
    except DegenerateInput:
        assume(False)
    # keep away from needles whose corners sit at the tolerance scale
    assume(P.area > min_area and np.min(np.linalg.norm(P.edges, axis=1)) > 1e-3)
    return P


@st.composite
def polytopes(draw):
    seed = draw(st.integers(0, 2**63 - 1))
    v = draw(st.integers(4, 24))
    profile = draw(st.sampled_from(verify.PROFILES))
    return verify.random_polytope(seed, v, profile)


@st.composite
def directions(draw):
    x = np.array(draw(st.tuples(coord, coord, coord)))
    assume(np.linalg.norm(x) > 1e-3)
    return x / np.linalg.norm(x)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
