import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from holoiso.unitary import base_frame_matrix

settings.register_profile(
    "holoiso",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("holoiso")


@pytest.fixture
def base_matrix():
    s = 1 / math.sqrt(2)
    return np.array([[-0.5, s, 0.5], [0.5, s, -0.5], [s, 0.0, s]], dtype=complex)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def test_fixture_matches_builder(base_matrix):
    assert np.max(np.abs(base_frame_matrix() - base_matrix)) < 1e-15
