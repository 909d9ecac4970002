"""The DBA iteration loop, its cost functionals, and bound calculators.

The loop alternates two steps: recompute the average sequence as the
per-index centroid of the current assignment, then recompute an optimal
assignment against that average.  Termination is detected structurally:
the run has converged when the new assignment map equals the previous one
pair for pair, which with deterministic tie-breaking is equivalent to a
cost stall.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from dbalab.core import (
    InputError,
    Instance,
    MeanSequence,
    PointSequence,
    WarpingPath,
    optimal_warping_path,
    path_cost,
    validate_warping_path,
)

DEFAULT_ITERATION_CAP = 10**6


@dataclass(eq=False)
class AssignmentMap:
    """One warping path per input sequence against a common mean length k."""

    paths: list[WarpingPath]
    k: int

    def validate(self, x: Instance) -> None:
        if len(self.paths) != x.n:
            raise InputError("assignment map needs one path per input sequence")
        for w in self.paths:
            if not validate_warping_path(w, x.m, self.k):
                raise InputError("assignment map contains an invalid warping path")

    def equals(self, other: "AssignmentMap") -> bool:
        if self.k != other.k or len(self.paths) != len(other.paths):
            return False
        return all(a.equals(b) for a, b in zip(self.paths, other.paths))


@dataclass(eq=False)
class IterationRecord:
    """State recorded after one mean update and reassignment."""

    iteration: int
    phi: float
    inertia: float
    mean: MeanSequence
    mean_displacement_sq: float  # squared L2 move of the mean since last record
    assignment: AssignmentMap | None = None


@dataclass(eq=False)
class DBARun:
    """Full trace of one DBA execution."""

    iterations: int
    termination: str  # 'converged' | 'iteration_cap' | 'cost_stall'
    trace: list[IterationRecord]
    final_mean: MeanSequence
    final_assignment: AssignmentMap

    def visited_means(self) -> list[MeanSequence]:
        return [rec.mean for rec in self.trace]

    def phi_values(self) -> list[float]:
        return [rec.phi for rec in self.trace]


def compute_mean(x: Instance, pi: AssignmentMap) -> MeanSequence:
    """Per-index centroid sequence of the clusters induced by pi."""
    pi.validate(x)
    k, d = pi.k, x.d
    sums = np.zeros((k, d))
    counts = np.zeros(k)
    for seq, w in zip(x.sequences, pi.paths):
        ii = w.pairs[:, 0] - 1
        jj = w.pairs[:, 1] - 1
        pts = seq.points[ii]
        counts += np.bincount(jj, minlength=k)
        for t in range(d):
            sums[:, t] += np.bincount(jj, weights=pts[:, t], minlength=k)
    # every warping path covers every mean index, so counts >= n > 0
    return MeanSequence(sums / counts[:, None])


def optimal_assignment(x: Instance, c: MeanSequence) -> AssignmentMap:
    """Optimal warping path for each input sequence against the mean c."""
    if c.dim != x.d:
        raise InputError("mean dimension does not match instance")
    paths = [optimal_warping_path(seq, c) for seq in x.sequences]
    return AssignmentMap(paths, c.length)


def total_warping_distance(x: Instance, pi: AssignmentMap, c: PointSequence) -> float:
    """Cost of assignment pi evaluated against an arbitrary candidate mean."""
    pi.validate(x)
    if c.length != pi.k:
        raise InputError("candidate mean has wrong length")
    return math.fsum(path_cost(seq, c, w) for seq, w in zip(x.sequences, pi.paths))


def inertia(x: Instance, pi: AssignmentMap) -> float:
    """Irreducible cost of pi: sum over clusters of ||y||^2 - ||centroid||^2."""
    pi.validate(x)
    c = compute_mean(x, pi)
    c_sq = (c.points * c.points).sum(axis=1)
    total = []
    for seq, w in zip(x.sequences, pi.paths):
        ii = w.pairs[:, 0] - 1
        jj = w.pairs[:, 1] - 1
        pts = seq.points[ii]
        total.append(math.fsum((pts * pts).sum(axis=1) - c_sq[jj]))
    return math.fsum(total)


def run_dba(
    x: Instance,
    k: int,
    init: AssignmentMap,
    cap: int = DEFAULT_ITERATION_CAP,
    record_assignments: bool = False,
) -> DBARun:
    """Run DBA from an initial assignment map until the assignment stabilises.

    The iteration count equals the number of mean updates executed.
    Hitting the cap is reported via termination='iteration_cap', not as an
    error.  record_assignments keeps the per-iteration assignment maps in
    the trace; off by default because adversarial instances produce long
    paths over many iterations.
    """
    if k < 1 or init.k != k:
        raise InputError("initial assignment map does not match k")
    if cap < 1:
        raise InputError("iteration cap must be at least 1")
    init.validate(x)

    pi = init
    phi_prev = None
    prev_mean = None
    trace: list[IterationRecord] = []
    termination = "iteration_cap"
    iterations = 0

    for it in range(1, cap + 1):
        c = compute_mean(x, pi)
        new_pi = optimal_assignment(x, c)
        phi = total_warping_distance(x, new_pi, c)
        inert = inertia(x, new_pi)
        if prev_mean is None:
            disp = 0.0
        else:
            dm = c.points - prev_mean.points
            disp = math.fsum((dm * dm).sum(axis=1))
        trace.append(
            IterationRecord(
                iteration=it,
                phi=phi,
                inertia=inert,
                mean=c,
                mean_displacement_sq=disp,
                assignment=new_pi if record_assignments else None,
            )
        )
        iterations = it
        if new_pi.equals(pi):
            termination = "converged"
            pi = new_pi
            break
        if phi_prev is not None and phi >= phi_prev:
            # cannot happen in exact arithmetic; guards against FP cycling
            termination = "cost_stall"
            pi = new_pi
            break
        pi = new_pi
        phi_prev = phi

    final_mean = trace[-1].mean if termination == "converged" else compute_mean(x, pi)
    return DBARun(
        iterations=iterations,
        termination=termination,
        trace=trace,
        final_mean=final_mean,
        final_assignment=pi,
    )


def visited_epsilon(run: DBARun) -> float:
    """Min squared distance between consecutive distinct visited means."""
    means = run.visited_means()
    best = math.inf
    for a, b in zip(means, means[1:]):
        dm = a.points - b.points
        dist = float((dm * dm).sum())
        if dist > 0.0 and dist < best:
            best = dist
    return best


def potential_bound(B: float, m: int, k: int, eps: float) -> float:
    """Step bound B*(m+k)/eps from the potential-function argument."""
    if B <= 0:
        raise InputError("B must be positive")
    if eps <= 0:
        raise InputError("eps must be positive")
    return B * (m + k) / eps


def worst_case_bound_log(n: int, m: int, k: int, d: int) -> float:
    """Natural log of the unconditional iteration bound (up to constant).

    The bound is (2n)^(dk) * C(m+k-2, m-1)^(2dk); the log form avoids
    overflow for any realistic parameters.
    """
    if min(n, m, k, d) < 1:
        raise InputError("all parameters must be positive")
    binom = math.comb(m + k - 2, m - 1)
    return d * k * math.log(2 * n) + 2 * d * k * math.log(binom)


def smoothed_bound(n: int, m: int, k: int, d: int, sigma: float) -> float:
    """Smoothed iteration-bound expression (up to constant).

    n^2 * m^(8n/d + 6) * d^4 * k^6 * ln(nm)^4 / sigma^2, valid for d >= 2
    and sigma in (0, 1].  The analysis additionally assumes k <= m; a
    warning is emitted when that is violated.
    """
    if d < 2:
        raise InputError("smoothed bound requires d >= 2")
    if not (0 < sigma <= 1):
        raise InputError("sigma must be in (0, 1]")
    if n * m < 2:
        raise InputError("requires n*m >= 2")
    if k > m:
        warnings.warn("smoothed bound derivation assumes k <= m", stacklevel=2)
    return (
        n**2
        * m ** (8 * n / d + 6)
        * d**4
        * k**6
        * math.log(n * m) ** 4
        / sigma**2
    )
