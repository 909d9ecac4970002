"""Experiment harness: grid runs over corpora and exponent regression.

The three modes mirror the iteration-count studies this package reruns:
vary the number of series, the subsequence length, or the mean length,
with a fixed number of repeats per grid point and a uniformly drawn
subsequence start day shared by all series of one run.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from dbalab.core import InputError, Instance, PointSequence
from dbalab.dba import (
    potential_bound,
    run_dba,
    smoothed_bound,
    visited_epsilon,
    worst_case_bound_log,
    DBARun,
)
from dbalab.initialization import random_walk_init
from dbalab.rng import RNG_ALGORITHM, derive_seed, make_rng
from dbalab.smoothed import normalization_parameter

MODES = ("vary_n", "vary_m", "vary_k", "lowerbound_demo", "smoothed_tail", "single_run")


@dataclass
class ExperimentConfig:
    mode: str
    grid: list
    repeats: int = 10
    seed: int = 0
    k: int | None = None  # fixed mean length, defaults to the run's m
    length: int | None = None  # fixed subsequence length where applicable
    cap: int = 10**6

    def __post_init__(self):
        if self.mode not in MODES:
            raise InputError(f"unknown mode {self.mode!r}")
        if not self.grid:
            raise InputError("grid must be nonempty")
        if self.repeats < 1:
            raise InputError("repeats must be at least 1")


@dataclass
class RegressionResult:
    exponent: float
    intercept: float
    r_squared: float


@dataclass
class RawRow:
    grid_value: int
    repeat_index: int
    seed: int
    iterations: int
    phi_final: float
    termination: str


@dataclass
class SummaryRow:
    grid_value: int
    mean_iters: float
    var_iters: float  # population variance
    repeats: int


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    raw: list[RawRow]
    summary: list[SummaryRow]
    skipped: list[tuple[int, str]]
    rng_algorithm: str = RNG_ALGORITHM


def _subsequence_instance(corpus, indices, start, length) -> Instance:
    return Instance(
        [PointSequence(corpus[i].points[start : start + length]) for i in indices]
    )


def _one_run(x: Instance, k: int, rng, cap: int) -> DBARun:
    init = random_walk_init(x, k, rng)
    return run_dba(x, k, init, cap=cap)


def run_experiment(cfg: ExperimentConfig, corpus: list[PointSequence]) -> ExperimentResult:
    """Run `repeats` seeded DBA runs per grid point and summarise iterations."""
    if cfg.mode not in ("vary_n", "vary_m", "vary_k"):
        raise InputError(f"run_experiment does not handle mode {cfg.mode!r}")
    if not corpus:
        raise InputError("empty corpus")
    n_total = len(corpus)
    series_len = corpus[0].length

    raw: list[RawRow] = []
    summary: list[SummaryRow] = []
    skipped: list[tuple[int, str]] = []

    for gi, gv in enumerate(cfg.grid):
        gv = int(gv)
        reason = _infeasible(cfg, gv, n_total, series_len)
        if reason:
            warnings.warn(f"grid point {gv} skipped: {reason}", stacklevel=2)
            skipped.append((gv, reason))
            continue
        iters = []
        for rep in range(cfg.repeats):
            run_seed = derive_seed(cfg.seed, gi * cfg.repeats + rep)
            rng = make_rng(run_seed)
            if cfg.mode == "vary_n":
                length = cfg.length or series_len
                r = int(rng.integers(0, n_total - gv + 1))
                start = int(rng.integers(0, series_len - length + 1))
                x = _subsequence_instance(corpus, range(r, r + gv), start, length)
                k = cfg.k or length
            elif cfg.mode == "vary_m":
                start = int(rng.integers(0, series_len - gv + 1))
                x = _subsequence_instance(corpus, range(n_total), start, gv)
                k = cfg.k or gv
            else:  # vary_k
                length = cfg.length or series_len
                start = int(rng.integers(0, series_len - length + 1))
                x = _subsequence_instance(corpus, range(n_total), start, length)
                k = gv
            run = _one_run(x, k, rng, cfg.cap)
            raw.append(
                RawRow(gv, rep, run_seed, run.iterations, run.trace[-1].phi, run.termination)
            )
            iters.append(run.iterations)
        mean = sum(iters) / len(iters)
        var = sum((v - mean) ** 2 for v in iters) / len(iters)
        summary.append(SummaryRow(gv, mean, var, len(iters)))
    return ExperimentResult(cfg, raw, summary, skipped)


def _infeasible(cfg: ExperimentConfig, gv: int, n_total: int, series_len: int):
    if gv < 1:
        return "nonpositive grid value"
    if cfg.mode == "vary_n":
        if gv > n_total:
            return f"only {n_total} series available"
        if (cfg.length or series_len) > series_len:
            return f"series length is {series_len}"
    elif cfg.mode == "vary_m":
        if gv > series_len:
            return f"series length is {series_len}"
    else:
        if (cfg.length or series_len) > series_len:
            return f"series length is {series_len}"
    return None


def loglog_exponent(points: list[tuple[float, float]]) -> RegressionResult:
    """Least-squares slope of ln(y) against ln(x)."""
    if len({p[0] for p in points}) < 2:
        raise InputError("need at least two distinct parameter values")
    if any(x <= 0 or y <= 0 for x, y in points):
        raise InputError("log-log regression requires positive values")
    lx = np.log([p[0] for p in points])
    ly = np.log([p[1] for p in points])
    slope, intercept = np.polyfit(lx, ly, 1)
    pred = slope * lx + intercept
    ss_res = float(((ly - pred) ** 2).sum())
    ss_tot = float(((ly - ly.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return RegressionResult(float(slope), float(intercept), r2)


def report_bounds(
    n: int,
    m: int,
    k: int,
    d: int,
    sigma: float | None = None,
    run: DBARun | None = None,
    x: Instance | None = None,
) -> str:
    """Human-readable report of the bound calculators, all up to constants."""
    lines = [
        f"parameters: n={n} m={m} k={k} d={d}",
        f"log worst-case bound (up to constant): {worst_case_bound_log(n, m, k, d):.6g}",
    ]
    if sigma is not None:
        if d < 2:
            lines.append("smoothed bound: warning, not applicable (requires d >= 2)")
        else:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                val = smoothed_bound(n, m, k, d, sigma)
            note = " [k > m: outside derivation regime]" if k > m else ""
            lines.append(
                f"smoothed bound expression (up to constant, sigma={sigma}): {val:.6g}{note}"
            )
    if run is not None:
        lines.append(f"observed iterations: {run.iterations} ({run.termination})")
        eps = visited_epsilon(run)
        lines.append(f"eps_visited: {eps:.6g}")
        if x is not None and math.isfinite(eps):
            chk = potential_check(x, run)
            lines.append(f"B (max squared point norm): {chk['B']:.6g}")
            lines.append(f"potential bound B*(m+k)/eps: {chk['potential_bound']:.6g}")
            lines.append(
                "potential bound check: "
                + ("pass" if chk["holds"] else "FAIL")
            )
    return "\n".join(lines)


def potential_check(x: Instance, run: DBARun) -> dict:
    """Observed iterations vs the visited-pairs potential bound."""
    B = normalization_parameter(x)
    eps = visited_epsilon(run)
    bound = math.inf if not math.isfinite(eps) else potential_bound(B, x.m, run.final_mean.length, eps)
    return {
        "B": B,
        "eps_visited": eps,
        "potential_bound": bound,
        "iterations": run.iterations,
        "holds": run.iterations <= bound + 1,
    }
