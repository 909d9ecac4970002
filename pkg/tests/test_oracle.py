import numpy as np
import pytest

from dbalab.core import Instance, MeanSequence, SizeError, count_warping_paths
from dbalab.dba import run_dba, total_warping_distance, compute_mean
from dbalab.initialization import random_walk_init
from dbalab.oracle import enumerate_assignment_maps, exact_mean, is_fixed_point
from dbalab.rng import derive_seed, make_rng
from conftest import random_instance


def test_enumeration_counts():
    assert len(list(enumerate_assignment_maps(1, 2, 2))) == 3
    assert len(list(enumerate_assignment_maps(2, 2, 2))) == 9
    assert len(list(enumerate_assignment_maps(2, 3, 3))) == count_warping_paths(3, 3) ** 2


def test_enumeration_guard():
    with pytest.raises(SizeError):
        list(enumerate_assignment_maps(4, 6, 6))


def test_enumerated_maps_are_valid(rng):
    x = random_instance(rng, 2, 3, 1)
    for pi in enumerate_assignment_maps(2, 3, 3):
        pi.validate(x)


def test_exact_mean_trivial_cases(rng):
    x = random_instance(rng, 1, 3, 2)
    mean, cost = exact_mean(x, 3)
    assert cost == pytest.approx(0.0, abs=1e-12)
    assert np.allclose(mean.points, x.sequences[0].points)
    x2 = Instance.from_arrays([x.sequences[0].points.copy()] * 2)
    mean2, cost2 = exact_mean(x2, 3)
    assert cost2 == pytest.approx(0.0, abs=1e-12)


def test_exact_mean_dominates_dba():
    for trial in range(10):
        rng = make_rng(derive_seed(23, trial))
        x = random_instance(rng, 2, 3, 2)
        _, opt = exact_mean(x, 3)
        for rep in range(5):
            run = run_dba(x, 3, random_walk_init(x, 3, rng))
            assert opt <= run.trace[-1].phi + 1e-9


def test_is_fixed_point(rng):
    x = random_instance(rng, 1, 4, 2)
    assert is_fixed_point(x, x.sequences[0])
    off = MeanSequence(x.sequences[0].points + 5.0)
    assert not is_fixed_point(x, off)


def test_converged_runs_are_fixed_points():
    for trial in range(30):
        rng = make_rng(derive_seed(29, trial))
        x = random_instance(rng, 3, 8, 2)
        run = run_dba(x, 4, random_walk_init(x, 4, rng))
        assert run.termination == "converged"
        assert is_fixed_point(x, run.final_mean)
        pi = run.final_assignment
        assert np.allclose(compute_mean(x, pi).points, run.final_mean.points)
