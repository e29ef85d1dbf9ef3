"""Command-line interface: solve, experiment, and oracle subcommands.

Exit codes: 0 success, 1 usage error, 2 numerical failure.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .experiments import (
    InstanceSpec,
    dat_filename,
    emit_dat,
    format_sci17,
    run_trials,
)
from .matrices import load_matrix, load_vector
from .oracle import NumericalError, solve_dual
from .potentials import ElasticNet
from .solvers import SolverConfig, canonical_method, run

CLI_METHODS = ("rk", "sk", "rsk", "ersk", "rsk-smoothed")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; the contract here is 1
    def error(self, message):
        raise UsageError(message)


def _build_parser():
    parser = _Parser(prog="rowaction", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="run one solver on a matrix/rhs file pair")
    solve.add_argument("--matrix")
    solve.add_argument("--rhs")
    solve.add_argument("--method", choices=CLI_METHODS)
    solve.add_argument("--lambda", dest="lam", type=float)
    solve.add_argument("--epsilon", type=float)
    solve.add_argument("--sampler", choices=("uniform", "rownorm"))
    solve.add_argument("--max-iters", type=int)
    solve.add_argument("--tol", type=float)
    solve.add_argument("--seed", type=int)
    solve.add_argument("--out")
    solve.add_argument("--config")

    exp = sub.add_parser("experiment", help="multi-trial study emitting dat files")
    exp.add_argument("--kind", choices=("gaussian", "tomography"))
    exp.add_argument("--m", type=int)
    exp.add_argument("--n", type=int)
    exp.add_argument("--s", type=int)
    exp.add_argument("--noise", type=float)
    exp.add_argument("--trials", type=int)
    exp.add_argument("--methods")
    exp.add_argument("--lambda", dest="lam", type=float)
    exp.add_argument("--epsilon", type=float)
    exp.add_argument("--sampler", choices=("uniform", "rownorm"))
    exp.add_argument("--max-iters", type=int)
    exp.add_argument("--log-every", type=int)
    exp.add_argument("--seed", type=int)
    exp.add_argument("--outdir")
    exp.add_argument("--config")

    orc = sub.add_parser("oracle", help="certified solution via the dual")
    orc.add_argument("--matrix")
    orc.add_argument("--rhs")
    orc.add_argument("--lambda", dest="lam", type=float)
    orc.add_argument("--tol", type=float)
    orc.add_argument("--out")
    orc.add_argument("--config")
    return parser


_DEFAULTS = {
    "solve": {"method": "rsk", "lam": 1.0, "epsilon": None, "sampler": "rownorm",
              "max_iters": 1000, "tol": 0.0, "seed": 0},
    "experiment": {"kind": "gaussian", "noise": 0.0, "trials": 1, "methods": "rk,rsk,ersk",
                   "lam": 1.0, "epsilon": None, "sampler": "rownorm", "max_iters": 1000,
                   "log_every": None, "seed": 0},
    "oracle": {"tol": 1e-10},
}

_REQUIRED = {
    "solve": ("matrix", "rhs", "out"),
    "experiment": ("m", "n", "s", "outdir"),
    "oracle": ("matrix", "rhs", "lam", "out"),
}


def _merge_options(args):
    """File config supplies defaults, explicit CLI flags win."""
    opts = dict(_DEFAULTS[args.command])
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}")
        if not isinstance(loaded, dict):
            raise UsageError("config file must hold a JSON object")
        for key, value in loaded.items():
            key = key.replace("-", "_")
            if key == "lambda":
                key = "lam"
            opts[key] = value
    for key, value in vars(args).items():
        if key in ("command", "config"):
            continue
        if value is not None:
            opts[key] = value
    missing = [k for k in _REQUIRED[args.command] if opts.get(k) is None]
    if missing:
        raise UsageError(f"missing required option(s): {', '.join('--' + k for k in missing)}")
    return opts


def _write_vector(path, vec):
    with open(path, "w", newline="\n") as fh:
        for v in vec:
            fh.write(format_sci17(v) + "\n")


def _cmd_solve(opts):
    A = load_matrix(opts["matrix"])
    b = load_vector(opts["rhs"])
    cfg = SolverConfig(
        method=opts["method"],
        lam=opts["lam"],
        epsilon=opts["epsilon"],
        sampler=opts["sampler"],
        max_iters=opts["max_iters"],
        tol_residual=opts["tol"],
        seed=opts["seed"],
    )
    state, log = run(A, b, cfg)
    _write_vector(opts["out"], state.x)
    emit_dat(str(opts["out"]) + ".log", zip(log.ks, log.residual))
    return 0


def _cmd_experiment(opts):
    methods = [m.strip() for m in str(opts["methods"]).split(",") if m.strip()]
    for m in methods:
        if m not in CLI_METHODS:
            raise UsageError(f"unknown method {m!r}")
    spec = InstanceSpec(
        kind=opts["kind"], m=opts["m"], n=opts["n"], s=opts["s"],
        noise_rel=opts["noise"], seed=opts["seed"],
    )
    cfg = SolverConfig(
        lam=opts["lam"], epsilon=opts["epsilon"], sampler=opts["sampler"],
        max_iters=opts["max_iters"], seed=opts["seed"], log_every=opts["log_every"],
    )
    stats = run_trials(spec, methods, cfg, opts["trials"])
    outdir = Path(opts["outdir"])
    outdir.mkdir(parents=True, exist_ok=True)
    for name in methods:
        ts = stats[canonical_method(name)]
        ts.check_ordering()
        for metric, per_stat in ts.stats.items():
            for stat, values in per_stat.items():
                fname = dat_filename(stat, metric, name, spec.n, spec.m, spec.s, spec.noise_rel)
                emit_dat(outdir / fname, zip(ts.ks, values))
    return 0


def _cmd_oracle(opts):
    A = load_matrix(opts["matrix"])
    b = load_vector(opts["rhs"])
    if not opts["lam"] > 0:
        raise UsageError("--lambda must be positive")
    result = solve_dual(A, b, ElasticNet(opts["lam"]), tol=opts["tol"])
    _write_vector(opts["out"], result.x_hat)
    return 0


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        opts = _merge_options(args)
        if args.command == "solve":
            return _cmd_solve(opts)
        if args.command == "experiment":
            return _cmd_experiment(opts)
        return _cmd_oracle(opts)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
