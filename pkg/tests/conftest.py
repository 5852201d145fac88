import math

import numpy as np
import pytest

from quadmap.sampling import sample_angle_tuple


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def random_angles(rng):
    """A deterministic batch of valid angle tuples away from the boundary."""
    return [sample_angle_tuple(rng) for _ in range(200)]


def sup(p, q):
    pt = p.as_tuple() if hasattr(p, "as_tuple") else tuple(p)
    qt = q.as_tuple() if hasattr(q, "as_tuple") else tuple(q)
    return max(abs(a - b) for a, b in zip(pt, qt))


PI = math.pi
