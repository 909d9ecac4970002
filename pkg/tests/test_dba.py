import math

import numpy as np
import pytest

from dbalab.core import Instance, MeanSequence, PointSequence, WarpingPath
from dbalab.dba import (
    AssignmentMap,
    compute_mean,
    inertia,
    optimal_assignment,
    potential_bound,
    run_dba,
    smoothed_bound,
    total_warping_distance,
    visited_epsilon,
    worst_case_bound_log,
)
from dbalab.core import InputError
from dbalab.initialization import random_walk_init
from dbalab.oracle import enumerate_assignment_maps
from dbalab.rng import derive_seed, make_rng
from conftest import random_instance


def diagonal_map(m, n):
    pairs = np.stack([np.arange(1, m + 1)] * 2, axis=1)
    return AssignmentMap([WarpingPath(pairs.copy()) for _ in range(n)], m)


def test_compute_mean_simple_centroid():
    x = Instance.from_arrays([np.array([[0.0, 0.0]]), np.array([[2.0, 0.0]])])
    pi = AssignmentMap([WarpingPath.from_pairs([(1, 1)])] * 2, 1)
    c = compute_mean(x, pi)
    assert np.allclose(c.points, [[1.0, 0.0]])


def test_compute_mean_identity_on_diagonal(rng):
    x = random_instance(rng, 1, 6, 2)
    c = compute_mean(x, diagonal_map(6, 1))
    assert np.array_equal(c.points, x.sequences[0].points)


def test_mean_minimizes_total_warping_distance(rng):
    x = random_instance(rng, 3, 5, 2)
    pi = random_walk_init(x, 4, rng)
    c = compute_mean(x, pi)
    base = total_warping_distance(x, pi, c)
    for _ in range(100):
        alt = MeanSequence(c.points + rng.normal(0, 0.3, size=c.points.shape))
        assert base <= total_warping_distance(x, pi, alt) + 1e-12


def test_optimal_assignment_cost_consistency(rng):
    from dbalab.core import dtw_distance

    x = random_instance(rng, 3, 6, 2)
    c = MeanSequence(rng.random((4, 2)))
    pi = optimal_assignment(x, c)
    assert total_warping_distance(x, pi, c) == pytest.approx(
        math.fsum(dtw_distance(s, c) for s in x.sequences), rel=1e-12
    )


def test_optimal_assignment_beats_enumeration(rng):
    x = random_instance(rng, 2, 4, 1)
    c = MeanSequence(rng.random((4, 1)))
    best = optimal_assignment(x, c)
    best_cost = total_warping_distance(x, best, c)
    for pi in enumerate_assignment_maps(2, 4, 4):
        assert best_cost <= total_warping_distance(x, pi, c) + 1e-12


def test_inertia_identity_and_decomposition(rng):
    for trial in range(20):
        trial_rng = make_rng(derive_seed(42, trial))
        x = random_instance(trial_rng, 3, 6, 2)
        pi = random_walk_init(x, 4, trial_rng)
        c = compute_mean(x, pi)
        i_pi = inertia(x, pi)
        assert i_pi == pytest.approx(total_warping_distance(x, pi, c), abs=1e-9)
        # decomposition against a random candidate mean
        alt = MeanSequence(trial_rng.random((4, 2)))
        counts = np.zeros(4)
        for w in pi.paths:
            counts += np.bincount(w.pairs[:, 1] - 1, minlength=4)
        extra = float((counts[:, None] * (alt.points - c.points) ** 2).sum())
        assert total_warping_distance(x, pi, alt) == pytest.approx(
            i_pi + extra, abs=1e-9
        )


def test_inertia_zero_for_identical_points():
    x = Instance.from_arrays([np.ones((3, 2)), np.ones((3, 2))])
    pi = diagonal_map(3, 2)
    assert inertia(x, pi) == pytest.approx(0.0, abs=1e-12)


def test_run_dba_immediate_fixed_point(rng):
    x = random_instance(rng, 1, 5, 2)
    run = run_dba(x, 5, diagonal_map(5, 1))
    assert run.iterations == 1
    assert run.termination == "converged"
    assert np.allclose(run.final_mean.points, x.sequences[0].points)


def test_run_dba_strict_descent_and_trace(rng):
    x = random_instance(rng, 4, 12, 2)
    run = run_dba(x, 6, random_walk_init(x, 6, rng))
    phis = run.phi_values()
    assert run.termination == "converged"
    for a, b in zip(phis, phis[1:-1]):
        assert b < a
    assert [rec.iteration for rec in run.trace] == list(range(1, run.iterations + 1))


def test_run_dba_cap(rng):
    x = random_instance(rng, 4, 15, 2)
    run = run_dba(x, 6, random_walk_init(x, 6, rng), cap=1)
    assert run.iterations == 1
    assert run.termination in ("iteration_cap", "converged")


def test_run_dba_rejects_bad_init(rng):
    x = random_instance(rng, 2, 5, 2)
    pi = random_walk_init(x, 3, rng)
    with pytest.raises(InputError):
        run_dba(x, 4, pi)


def test_cluster_coverage(rng):
    x = random_instance(rng, 3, 10, 1)
    run = run_dba(x, 5, random_walk_init(x, 5, rng), record_assignments=True)
    for rec in run.trace:
        counts = np.zeros(5)
        for w in rec.assignment.paths:
            counts += np.bincount(w.pairs[:, 1] - 1, minlength=5)
        assert counts.min() >= x.n


def test_visited_epsilon(rng):
    x = random_instance(rng, 4, 12, 2)
    run = run_dba(x, 5, random_walk_init(x, 5, rng))
    eps = visited_epsilon(run)
    if run.iterations > 1:
        assert 0 < eps < math.inf
    else:
        assert eps == math.inf


def test_potential_bound_values():
    assert potential_bound(1.0, 2, 2, 0.5) == pytest.approx(8.0)
    assert potential_bound(1.0, 2, 2, 1.0) == pytest.approx(4.0)
    with pytest.raises(InputError):
        potential_bound(1.0, 2, 2, 0.0)
    with pytest.raises(InputError):
        potential_bound(0.0, 2, 2, 1.0)


def test_worst_case_bound_log_values():
    assert worst_case_bound_log(1, 1, 1, 1) == pytest.approx(math.log(2))
    assert worst_case_bound_log(2, 3, 3, 2) == pytest.approx(
        math.log(4**6 * 6**12)
    )
    base = worst_case_bound_log(2, 4, 4, 2)
    for bumped in (
        worst_case_bound_log(3, 4, 4, 2),
        worst_case_bound_log(2, 5, 4, 2),
        worst_case_bound_log(2, 4, 5, 2),
        worst_case_bound_log(2, 4, 4, 3),
    ):
        assert bumped >= base


def test_smoothed_bound_scaling_and_guards():
    v1 = smoothed_bound(2, 10, 5, 2, 0.5)
    v2 = smoothed_bound(2, 10, 5, 2, 0.25)
    assert v2 == pytest.approx(4 * v1)
    assert 0 < v1 < math.inf
    # exponent 8n/d decreases with d
    assert smoothed_bound(8, 10, 5, 4, 0.5) < smoothed_bound(8, 10, 5, 2, 0.5)
    with pytest.raises(InputError):
        smoothed_bound(2, 10, 5, 1, 0.5)
    with pytest.raises(InputError):
        smoothed_bound(2, 10, 5, 2, 1.5)
    with pytest.warns(UserWarning):
        smoothed_bound(2, 5, 9, 2, 0.5)
