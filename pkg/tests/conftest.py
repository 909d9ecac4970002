import numpy as np
import pytest

from dbalab.core import Instance, PointSequence
from dbalab.rng import derive_seed, make_rng


def random_instance(rng, n, m, d):
    return Instance.from_arrays([rng.random((m, d)) for _ in range(n)])


@pytest.fixture
def rng():
    return make_rng(20240817)


@pytest.fixture
def small_instance(rng):
    return random_instance(rng, 3, 5, 2)
