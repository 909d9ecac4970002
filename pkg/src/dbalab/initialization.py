"""Initialization schemes for the first assignment map or mean sequence."""

from __future__ import annotations

import numpy as np

from dbalab.core import Instance, MeanSequence, WarpingPath, dtw_distance
from dbalab.dba import AssignmentMap
from dbalab.rng import make_rng


def random_walk_init(x: Instance, k: int, seed: int | np.random.Generator) -> AssignmentMap:
    """Random valid assignment map built from one monotone walk per sequence.

    Each walk starts at (1, 1) and at every step picks uniformly among
    advancing the input index, the mean index, or both (probability 1/3
    each).  When one index has reached its end only the other advances.
    """
    rng = seed if isinstance(seed, np.random.Generator) else make_rng(seed)
    m = x.m
    paths = []
    for _ in range(x.n):
        i, j = 1, 1
        pairs = [(1, 1)]
        while i < m or j < k:
            if i == m:
                j += 1
            elif j == k:
                i += 1
            else:
                move = int(rng.integers(3))
                if move == 0:
                    i += 1
                elif move == 1:
                    j += 1
                else:
                    i += 1
                    j += 1
            pairs.append((i, j))
        paths.append(WarpingPath.from_pairs(pairs))
    return AssignmentMap(paths, k)


def medoid_init(x: Instance) -> MeanSequence:
    """The input sequence minimising summed DTW distance to the others.

    Ties break to the lowest index; the implied mean length is k = m.
    """
    best_idx = 0
    best_cost = None
    for j, cand in enumerate(x.sequences):
        cost = sum(
            dtw_distance(x.sequences[i], cand) for i in range(x.n) if i != j
        )
        if best_cost is None or cost < best_cost:
            best_cost = cost
            best_idx = j
    return MeanSequence(x.sequences[best_idx].points.copy())


def explicit_init(pi: AssignmentMap, x: Instance) -> AssignmentMap:
    """Validate and pass through a prescribed initial assignment map."""
    pi.validate(x)
    return pi
