"""Gaussian perturbation model and Monte Carlo estimators.

Perturbed instances drive two kinds of empirical checks: tail behaviour of
the maximum point norm, and the distribution of DBA iteration counts under
increasing noise.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from dbalab.core import InputError, Instance, PointSequence
from dbalab.dba import AssignmentMap, DBARun, run_dba, visited_epsilon
from dbalab.initialization import random_walk_init
from dbalab.rng import make_rng


@dataclass
class PerturbationConfig:
    sigma: float
    seed: int
    trials: int = 1

    def __post_init__(self):
        if self.sigma <= 0:
            raise InputError("sigma must be positive")
        if self.trials < 1:
            raise InputError("trials must be at least 1")


def perturb(x: Instance, cfg: PerturbationConfig, rng: np.random.Generator | None = None) -> Instance:
    """Add i.i.d. N(0, sigma) noise to every coordinate.

    The adversary's box is the unit cube; coordinates outside [0, 1] only
    trigger a warning since the perturbation itself is well-defined
    anywhere.  A sigma > 1 is equivalent to a scaled-down instance with
    sigma = 1, so it is applied directly rather than rejected.
    """
    if rng is None:
        rng = make_rng(cfg.seed)
    arrays = []
    warned = False
    for seq in x.sequences:
        pts = seq.points
        if not warned and (pts.min() < 0.0 or pts.max() > 1.0):
            warnings.warn("instance coordinates leave the unit box", stacklevel=2)
            warned = True
        arrays.append(pts + rng.normal(0.0, cfg.sigma, size=pts.shape))
    return Instance.from_arrays(arrays)


def normalization_parameter(x: Instance) -> float:
    """Tightest B with ||y||^2 <= B over all input points."""
    return max(float((s.points * s.points).sum(axis=1).max()) for s in x.sequences)


def norm_tail_threshold(n: int, m: int, d: int, sigma: float, t: float) -> float:
    """Max-norm threshold sqrt(d) + t*sigma*sqrt(2 d ln(nm)) of the tail bound."""
    if n * m < 2:
        raise InputError("requires n*m >= 2")
    return math.sqrt(d) + t * sigma * math.sqrt(2.0 * d * math.log(n * m))


def visited_separation(run: DBARun) -> float:
    """Min squared distance between consecutive distinct visited means.

    This is the visited-pairs surrogate of the separation property; the
    all-pairs quantity over every assignment map is exponential to compute.
    """
    eps = visited_epsilon(run)
    if not math.isfinite(eps):
        raise InputError("run visited fewer than two distinct means")
    return eps


@dataclass(eq=False)
class TrialRecord:
    trial: int
    seed: int
    iterations: int
    phi_final: float
    eps_visited: float
    B: float
    termination: str


@dataclass(eq=False)
class IterationTail:
    """Empirical distribution of iteration counts over perturbed trials."""

    records: list[TrialRecord]

    @property
    def sorted_iterations(self) -> list[int]:
        return sorted(r.iterations for r in self.records)

    @property
    def mean_iterations(self) -> float:
        return sum(r.iterations for r in self.records) / len(self.records)


def iteration_tail(
    x_base: Instance,
    k: int,
    cfg: PerturbationConfig,
    init_scheme: str | AssignmentMap = "random_walk",
    cap: int = 10**6,
) -> IterationTail:
    """Run DBA on independently perturbed copies and collect iteration counts.

    init_scheme is either 'random_walk' (a fresh seeded walk per trial) or
    a fixed AssignmentMap reused for every trial (e.g. the prescribed
    initial assignment of an adversarial instance).  Trials hitting the
    cap are recorded, not dropped.  Trial t uses seed XOR t.
    """
    records = []
    for trial in range(cfg.trials):
        trial_seed = (cfg.seed ^ trial) & 0xFFFFFFFFFFFFFFFF
        rng = make_rng(trial_seed)
        xp = perturb(x_base, cfg, rng=rng)
        if isinstance(init_scheme, AssignmentMap):
            init = init_scheme
        elif init_scheme == "random_walk":
            init = random_walk_init(xp, k, rng)
        else:
            raise InputError(f"unknown init scheme: {init_scheme!r}")
        run = run_dba(xp, k, init, cap=cap)
        eps = visited_epsilon(run)
        records.append(
            TrialRecord(
                trial=trial,
                seed=trial_seed,
                iterations=run.iterations,
                phi_final=run.trace[-1].phi,
                eps_visited=eps,
                B=normalization_parameter(xp),
                termination=run.termination,
            )
        )
    return IterationTail(records)
