"""Command-line harness.

Subcommands: run, experiment, lowerbound, smoothed, bounds, oracle-check.
All outputs are CSV (plus a JSON sidecar for generated instances); runs
are deterministic for a fixed seed.  Exit codes: 0 success, 1 input or
format error, 2 infeasible configuration, 3 internal assertion failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from dbalab import __version__
from dbalab.core import InputError, Instance, SizeError
from dbalab.data import FormatError, ingest_csv
from dbalab.dba import run_dba
from dbalab.experiment import (
    ExperimentConfig,
    loglog_exponent,
    potential_check,
    report_bounds,
    run_experiment,
)
from dbalab.initialization import medoid_init, random_walk_init
from dbalab.lowerbound import GadgetParams, generate_gadget_instance, DEFAULT_SCALE
from dbalab.oracle import exact_mean
from dbalab.rng import RNG_ALGORITHM, derive_seed, make_rng
from dbalab.smoothed import PerturbationConfig, iteration_tail


class InfeasibleConfig(Exception):
    pass


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if header:
            fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _out_dir(args) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_trace(path: Path, run) -> None:
    _write_csv(
        path,
        ["iteration", "phi", "inertia", "mean_l2_displacement"],
        [
            (rec.iteration, rec.phi, rec.inertia, rec.mean_displacement_sq)
            for rec in run.trace
        ],
    )


def _load_instance(args) -> Instance:
    corpus = ingest_csv(args.input, dim=args.dim)
    return Instance(corpus)


def cmd_run(args) -> int:
    x = _load_instance(args)
    k = args.k or x.m
    if args.init == "medoid":
        from dbalab.dba import optimal_assignment

        mean = medoid_init(x)
        k = mean.length
        init = optimal_assignment(x, mean)
    else:
        init = random_walk_init(x, k, args.seed)
    run = run_dba(x, k, init, cap=args.cap)
    out = _out_dir(args)
    _write_trace(out / "trace.csv", run)
    chk = potential_check(x, run)
    print(f"rng: {RNG_ALGORITHM}  seed: {args.seed}")
    print(f"iterations: {run.iterations}  termination: {run.termination}")
    print(f"phi_final: {run.trace[-1].phi!r}")
    print(f"potential bound check: {'pass' if chk['holds'] else 'FAIL'}")
    print(f"trace written to {out / 'trace.csv'}")
    return 0


def cmd_experiment(args) -> int:
    corpus = ingest_csv(args.input, dim=args.dim)
    cfg = ExperimentConfig(
        mode=args.mode,
        grid=[int(v) for v in args.grid.split(",")],
        repeats=args.repeats,
        seed=args.seed,
        k=args.k,
        length=args.length,
        cap=args.cap,
    )
    result = run_experiment(cfg, corpus)
    if not result.summary:
        raise InfeasibleConfig("every grid point was infeasible")
    out = _out_dir(args)
    _write_csv(
        out / "summary.csv",
        ["grid_value", "mean_iters", "var_iters", "repeats"],
        [(r.grid_value, r.mean_iters, r.var_iters, r.repeats) for r in result.summary],
    )
    _write_csv(
        out / "raw.csv",
        ["grid_value", "repeat_index", "seed", "iterations", "phi_final", "termination"],
        [
            (r.grid_value, r.repeat_index, r.seed, r.iterations, r.phi_final, r.termination)
            for r in result.raw
        ],
    )
    exp_rows = []
    if len(result.summary) >= 2:
        reg = loglog_exponent([(r.grid_value, r.mean_iters) for r in result.summary])
        exp_rows.append((args.mode, reg.exponent, reg.intercept, reg.r_squared))
    _write_csv(
        out / "exponents.csv",
        ["series_label", "exponent", "intercept", "r_squared"],
        exp_rows,
    )
    print(f"rng: {result.rng_algorithm}  seed: {args.seed}")
    for r in result.summary:
        print(f"grid={r.grid_value}: mean={r.mean_iters} var={r.var_iters} ({r.repeats} runs)")
    for gv, reason in result.skipped:
        print(f"grid={gv}: skipped ({reason})")
    if exp_rows:
        print(f"log-log exponent: {exp_rows[0][1]:.4f} (R^2={exp_rows[0][3]:.4f})")
    return 0


def cmd_lowerbound(args) -> int:
    params = GadgetParams(gadgets=args.gadgets, scale=args.scale)
    gi = generate_gadget_instance(params, balance=True)
    out = _out_dir(args)
    _write_csv(
        out / "instance.csv",
        [],
        [seq.points.reshape(-1).tolist() for seq in gi.instance.sequences],
    )
    with open(out / "instance.json", "w", encoding="utf-8") as fh:
        json.dump(gi.to_sidecar(), fh, indent=2)
        fh.write("\n")
    print(f"gadgets: {args.gadgets}  scale: {args.scale}  m: {gi.instance.m}  k: {gi.k}")
    if not args.generate_only:
        run = run_dba(gi.instance, gi.k, gi.initial_assignment, cap=args.cap)
        _write_trace(out / "trace.csv", run)
        print(f"iterations: {run.iterations}  termination: {run.termination}")
    return 0


def cmd_smoothed(args) -> int:
    if args.input:
        x = _load_instance(args)
        k = args.k or x.m
        init = "random_walk"
    else:
        params = GadgetParams(gadgets=args.gadgets, scale=args.scale)
        gi = generate_gadget_instance(params, balance=True)
        x, k, init = gi.instance, gi.k, gi.initial_assignment
    cfg = PerturbationConfig(sigma=args.sigma, seed=args.seed, trials=args.trials)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        tail = iteration_tail(x, k, cfg, init_scheme=init, cap=args.cap)
    out = _out_dir(args)
    _write_csv(
        out / "tail.csv",
        ["trial", "seed", "iterations", "phi_final", "eps_visited", "B"],
        [
            (r.trial, r.seed, r.iterations, r.phi_final, r.eps_visited, r.B)
            for r in tail.records
        ],
    )
    print(f"rng: {RNG_ALGORITHM}  seed: {args.seed}  sigma: {args.sigma}")
    print(f"trials: {args.trials}  mean iterations: {tail.mean_iterations}")
    capped = sum(1 for r in tail.records if r.termination == "iteration_cap")
    if capped:
        print(f"trials at cap: {capped}")
    return 0


def cmd_bounds(args) -> int:
    run = None
    x = None
    if args.input:
        x = _load_instance(args)
        k = args.k or x.m
        init = random_walk_init(x, k, args.seed)
        run = run_dba(x, k, init, cap=args.cap)
        print(report_bounds(x.n, x.m, k, x.d, sigma=args.sigma, run=run, x=x))
    else:
        print(report_bounds(args.n, args.m, args.k, args.d, sigma=args.sigma))
    return 0


def cmd_oracle_check(args) -> int:
    x = _load_instance(args)
    k = args.k or x.m
    _, opt_cost = exact_mean(x, k)
    best = None
    for rep in range(args.restarts):
        init = random_walk_init(x, k, derive_seed(args.seed, rep))
        run = run_dba(x, k, init, cap=args.cap)
        phi = run.trace[-1].phi
        best = phi if best is None else min(best, phi)
    print(f"oracle optimum: {opt_cost!r}")
    print(f"best DBA cost over {args.restarts} restarts: {best!r}")
    gap = best - opt_cost
    print(f"gap: {gap!r}")
    if gap < -1e-9:
        print("internal assertion failure: DBA beat the exhaustive oracle")
        return 3
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dbalab", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, needs_input=True):
        sp.add_argument("--seed", type=int, default=0, help="64-bit RNG seed")
        sp.add_argument("--cap", type=int, default=10**6, help="iteration cap")
        sp.add_argument("--out-dir", default="dbalab-out", help="output directory")
        sp.add_argument("--dim", type=int, default=1, help="coordinates per point")
        if needs_input:
            sp.add_argument("--input", required=True, help="corpus CSV path")

    sp = sub.add_parser("run", help="one DBA run with full trace export")
    common(sp)
    sp.add_argument("--k", type=int, help="mean length (default: m)")
    sp.add_argument("--init", choices=("random-walk", "medoid"), default="random-walk")
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("experiment", help="grid experiment over a corpus")
    common(sp)
    sp.add_argument("--mode", choices=("vary_n", "vary_m", "vary_k"), required=True)
    sp.add_argument("--grid", required=True, help="comma-separated grid values")
    sp.add_argument("--repeats", type=int, default=10)
    sp.add_argument("--k", type=int, help="fixed mean length")
    sp.add_argument("--length", type=int, help="fixed subsequence length")
    sp.set_defaults(func=cmd_experiment)

    sp = sub.add_parser("lowerbound", help="generate/run the adversarial instance")
    common(sp, needs_input=False)
    sp.add_argument("--gadgets", type=int, default=3)
    sp.add_argument("--scale", type=int, default=DEFAULT_SCALE)
    sp.add_argument("--generate-only", action="store_true")
    sp.set_defaults(func=cmd_lowerbound)

    sp = sub.add_parser("smoothed", help="iteration tail under perturbation")
    common(sp, needs_input=False)
    sp.add_argument("--input", help="corpus CSV (default: gadget instance)")
    sp.add_argument("--gadgets", type=int, default=3)
    sp.add_argument("--scale", type=int, default=DEFAULT_SCALE)
    sp.add_argument("--sigma", type=float, default=0.25)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--k", type=int)
    sp.set_defaults(func=cmd_smoothed)

    sp = sub.add_parser("bounds", help="report the bound calculators")
    common(sp, needs_input=False)
    sp.add_argument("--input", help="optional corpus CSV; runs DBA and checks")
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--m", type=int, default=10)
    sp.add_argument("--k", type=int, default=5)
    sp.add_argument("--d", type=int, default=2)
    sp.add_argument("--sigma", type=float)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("oracle-check", help="compare DBA against the exhaustive oracle")
    common(sp)
    sp.add_argument("--k", type=int, help="mean length (default: m)")
    sp.add_argument("--restarts", type=int, default=20)
    sp.set_defaults(func=cmd_oracle_check)

    return p


def main(argv=None) -> int:
    threads = os.environ.get("DBALAB_THREADS")
    if threads:
        try:
            import numba

            numba.set_num_threads(max(1, int(threads)))
        except (ValueError, ImportError):
            pass
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, SizeError, InputError, FileNotFoundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InfeasibleConfig as exc:
        print(f"infeasible configuration: {exc}", file=sys.stderr)
        return 2
    except AssertionError as exc:
        print(f"internal assertion failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
