import math

import numpy as np
import pytest

from dbalab.core import (
    InputError,
    PointSequence,
    SizeError,
    WarpingPath,
    count_monotone_paths_no_diagonal,
    count_warping_paths,
    dtw_distance,
    enumerate_warping_paths,
    optimal_warping_path,
    path_cost,
    validate_warping_path,
)
from dbalab.rng import derive_seed, make_rng


def test_point_sequence_coercion_and_validation():
    s = PointSequence(np.array([1.0, 2.0, 3.0]))
    assert s.length == 3 and s.dim == 1
    with pytest.raises(InputError):
        PointSequence(np.array([[1.0, np.nan]]))
    with pytest.raises(InputError):
        PointSequence(np.zeros((0, 2)))


def test_dtw_identity_is_zero(rng):
    a = PointSequence(rng.random((7, 3)))
    assert dtw_distance(a, a) == 0.0


def test_dtw_known_example():
    a = PointSequence(np.array([0.0, 2.0]))
    b = PointSequence(np.array([0.0, 1.0, 2.0]))
    assert dtw_distance(a, b) == pytest.approx(1.0, abs=1e-12)
    w = optimal_warping_path(a, b)
    assert path_cost(a, b, w) == pytest.approx(1.0, abs=1e-12)


def test_dtw_dimension_mismatch():
    a = PointSequence(np.zeros((2, 1)))
    b = PointSequence(np.zeros((2, 2)))
    with pytest.raises(InputError):
        dtw_distance(a, b)


def test_dtw_matches_enumeration_oracle():
    for trial in range(50):
        rng = make_rng(derive_seed(101, trial))
        m1 = int(rng.integers(1, 7))
        m2 = int(rng.integers(1, 7))
        d = int(rng.integers(1, 4))
        a = PointSequence(rng.random((m1, d)))
        b = PointSequence(rng.random((m2, d)))
        best = min(path_cost(a, b, w) for w in enumerate_warping_paths(m1, m2))
        assert dtw_distance(a, b) == pytest.approx(best, abs=1e-9)


def test_dtw_symmetry(rng):
    a = PointSequence(rng.random((6, 2)))
    b = PointSequence(rng.random((4, 2)))
    assert dtw_distance(a, b) == dtw_distance(b, a)


def test_optimal_path_prefers_diagonal_on_ties(rng):
    a = PointSequence(rng.random((5, 2)))
    w = optimal_warping_path(a, a)
    expected = np.stack([np.arange(1, 6), np.arange(1, 6)], axis=1)
    assert np.array_equal(w.pairs, expected)


def test_optimal_path_is_valid_and_costs_match(rng):
    for _ in range(30):
        m1 = int(rng.integers(1, 9))
        m2 = int(rng.integers(1, 9))
        a = PointSequence(rng.random((m1, 2)))
        b = PointSequence(rng.random((m2, 2)))
        w = optimal_warping_path(a, b)
        assert validate_warping_path(w, m1, m2)
        assert path_cost(a, b, w) == pytest.approx(dtw_distance(a, b), rel=1e-12)


def test_enumerate_small_counts():
    assert len(enumerate_warping_paths(1, 1)) == 1
    assert len(enumerate_warping_paths(2, 2)) == 3
    assert len(enumerate_warping_paths(3, 3)) == 13


def test_enumerate_no_duplicates():
    paths = enumerate_warping_paths(4, 3)
    seen = {tuple(map(tuple, w.pairs)) for w in paths}
    assert len(seen) == len(paths)
    assert all(validate_warping_path(w, 4, 3) for w in paths)


def test_enumeration_guard():
    with pytest.raises(SizeError):
        enumerate_warping_paths(9, 8)


def test_monotone_count_examples():
    assert count_monotone_paths_no_diagonal(2, 2) == 2
    assert count_monotone_paths_no_diagonal(1, 5) == 1
    assert count_monotone_paths_no_diagonal(4, 3) == 10


def test_counting_identities_up_to_eight():
    for m in range(1, 9):
        for k in range(1, 9):
            assert count_monotone_paths_no_diagonal(m, k) == math.comb(m + k - 2, m - 1)
            if m + k <= 16:
                paths = enumerate_warping_paths(m, k)
                assert len(paths) == count_warping_paths(m, k)
                no_diag = [
                    w
                    for w in paths
                    if not np.any(
                        (np.diff(w.pairs[:, 0]) == 1) & (np.diff(w.pairs[:, 1]) == 1)
                    )
                ]
                assert len(no_diag) == count_monotone_paths_no_diagonal(m, k)


def test_validate_warping_path_rejections():
    diag = WarpingPath.from_pairs([(1, 1), (2, 2), (3, 3)])
    assert validate_warping_path(diag, 3, 3)
    skip = WarpingPath.from_pairs([(1, 1), (3, 1)])
    assert not validate_warping_path(skip, 3, 1)
    short = WarpingPath.from_pairs([(1, 1), (2, 2)])
    assert not validate_warping_path(short, 2, 3)
    stutter = WarpingPath.from_pairs([(1, 1), (1, 1), (2, 2)])
    assert not validate_warping_path(stutter, 2, 2)
