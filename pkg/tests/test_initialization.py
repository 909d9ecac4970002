import numpy as np
import pytest

from dbalab.core import InputError, Instance, WarpingPath, validate_warping_path
from dbalab.dba import AssignmentMap, run_dba
from dbalab.initialization import explicit_init, medoid_init, random_walk_init
from dbalab.rng import derive_seed, make_rng
from conftest import random_instance


def test_random_walk_reproducible(rng):
    x = random_instance(rng, 3, 8, 2)
    a = random_walk_init(x, 5, 99)
    b = random_walk_init(x, 5, 99)
    assert a.equals(b)
    c = random_walk_init(x, 5, 100)
    assert not a.equals(c)


def test_random_walk_always_valid():
    for trial in range(300):
        rng = make_rng(derive_seed(5, trial))
        n = int(rng.integers(1, 4))
        m = int(rng.integers(1, 12))
        k = int(rng.integers(1, 12))
        x = random_instance(rng, n, m, 1)
        pi = random_walk_init(x, k, rng)
        assert len(pi.paths) == n
        for w in pi.paths:
            assert validate_warping_path(w, m, k)


def test_random_walk_degenerate_lengths(rng):
    x = random_instance(rng, 2, 6, 1)
    pi = random_walk_init(x, 1, rng)
    for w in pi.paths:
        assert np.array_equal(w.pairs[:, 1], np.ones(6, dtype=np.int64))
    x1 = random_instance(rng, 2, 1, 1)
    pi1 = random_walk_init(x1, 4, rng)
    for w in pi1.paths:
        assert np.array_equal(w.pairs[:, 0], np.ones(4, dtype=np.int64))


def test_descent_from_first_iteration():
    for trial in range(50):
        rng = make_rng(derive_seed(17, trial))
        x = random_instance(rng, 3, 10, 2)
        run = run_dba(x, 5, random_walk_init(x, 5, rng))
        phis = run.phi_values()
        assert all(np.isfinite(phis))
        limit = phis[:-1] if run.termination == "converged" else phis
        assert all(b < a for a, b in zip(limit, limit[1:]))


def test_medoid_single_sequence(rng):
    x = random_instance(rng, 1, 5, 2)
    assert medoid_init(x).equals(x.sequences[0])


def test_medoid_example():
    x = Instance.from_arrays([np.array([0.0]), np.array([1.0]), np.array([10.0])])
    c = medoid_init(x)
    assert np.allclose(c.points, [[1.0]])


def test_medoid_is_an_input_sequence(rng):
    x = random_instance(rng, 4, 6, 2)
    c = medoid_init(x)
    assert any(c.equals(s) for s in x.sequences)


def test_explicit_init_passthrough_and_validation(rng):
    x = random_instance(rng, 2, 4, 1)
    pairs = np.stack([np.arange(1, 5)] * 2, axis=1)
    pi = AssignmentMap([WarpingPath(pairs.copy()) for _ in range(2)], 4)
    assert explicit_init(pi, x) is pi
    bad = AssignmentMap(
        [WarpingPath.from_pairs([(1, 1), (2, 2), (3, 3)])] * 2, 4
    )
    with pytest.raises(InputError):
        explicit_init(bad, x)
