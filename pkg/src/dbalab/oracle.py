"""Brute-force ground truth at tiny scale.

Exhaustively enumerates assignment maps (Cartesian products of warping
paths) to find the globally optimal mean of a given length.  This works
because for a fixed assignment the optimal mean is the per-index centroid,
so optimising over assignments suffices.
"""

from __future__ import annotations

from itertools import product

import numpy as np

from dbalab.core import (
    Instance,
    MeanSequence,
    SizeError,
    count_warping_paths,
    enumerate_warping_paths,
)
from dbalab.dba import AssignmentMap, compute_mean, optimal_assignment, total_warping_distance

_MAP_GUARD = 10**6


def enumerate_assignment_maps(n: int, m: int, k: int):
    """Yield every valid assignment map for n sequences of length m and mean length k."""
    total = count_warping_paths(m, k) ** n
    if total > _MAP_GUARD:
        raise SizeError(
            f"{total} assignment maps exceed the enumeration guard of {_MAP_GUARD}"
        )
    per_seq = enumerate_warping_paths(m, k)
    for combo in product(per_seq, repeat=n):
        yield AssignmentMap(list(combo), k)


def exact_mean(x: Instance, k: int) -> tuple[MeanSequence, float]:
    """Globally optimal length-k mean and its cost, by exhaustive enumeration."""
    best_cost = None
    best_mean = None
    for pi in enumerate_assignment_maps(x.n, x.m, k):
        c = compute_mean(x, pi)
        cost = total_warping_distance(x, pi, c)
        if best_cost is None or cost < best_cost:
            best_cost = cost
            best_mean = c
    return best_mean, best_cost


def is_fixed_point(x: Instance, c: MeanSequence, rel_tol: float = 1e-12) -> bool:
    """True iff the centroid of the optimal assignment against c equals c."""
    if c.dim != x.d:
        return False
    pi = optimal_assignment(x, c)
    c2 = compute_mean(x, pi)
    scale = max(1.0, float(np.abs(c.points).max()))
    return bool(np.all(np.abs(c2.points - c.points) <= rel_tol * scale))
