"""Command line entry point.

Subcommands::

    fasttwosample test  --x X.csv --y Y.csv --method me --J 5 --gamma 1.0 [--json]
    fasttwosample tune  --x X.csv --y Y.csv --method me --grid -10:10:1 --reps 25
    fasttwosample power CONFIG [--out results.csv]
    fasttwosample type1 CONFIG [--out results.csv]

Exit status is 0 when a run completes (whatever its decision), 2 for input
errors and 3 for numerical failures.
"""

import argparse
import csv
import json
import math
import sys
from pathlib import Path

from .. import tuning
from ..analytic_tests import truncate_pair
from ..errors import DataError, DomainError, SingularMatrixError
from .config import METHODS, TestEntry, load_config
from .csvio import load_csv_pair, write_rows
from .runner import make_test, run_power_curve, run_type1

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3


def _gamma_arg(text):
    if text.lower() == "tune":
        return "tune"
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive number or 'tune', got {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"gamma must be positive, got {text!r}")
    return value


def _add_data_args(p):
    p.add_argument("--x", required=True, help="CSV file with the first sample")
    p.add_argument("--y", required=True, help="CSV file with the second sample")
    p.add_argument("--method", choices=METHODS, default="me")
    p.add_argument("--J", type=int, default=5, help="number of test frequencies")
    p.add_argument("--B", type=int, default=5, help="block size for the block MMD test")
    p.add_argument("--permutations", type=int, default=250)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--truncate", action="store_true", help="subsample the larger sample when sizes differ")


def build_parser():
    parser = argparse.ArgumentParser(prog="fasttwosample", description="Linear-time two-sample tests and benchmarks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("test", help="run one test on two CSV samples")
    _add_data_args(p)
    p.add_argument("--gamma", type=_gamma_arg, default=1.0, help="length-scale, or 'tune'")
    p.add_argument("--grid", default="-10:10:1", help="log2 grid used with --gamma tune")
    p.add_argument("--reps", type=int, default=tuning.DEFAULT_REPS)
    p.add_argument("--json", action="store_true", help="print a JSON object")

    p = sub.add_parser("tune", help="select the length-scale by bootstrap on the data")
    _add_data_args(p)
    p.add_argument("--grid", default="-10:10:1", help="lo:hi:step in log2 units")
    p.add_argument("--reps", type=int, default=tuning.DEFAULT_REPS)

    for name, help_ in (("power", "power curve from a config file"), ("type1", "Type-I error from a config file")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("config")
        p.add_argument("--out", help="write the result CSV here instead of stdout")
    return parser


def _load(args):
    X, Y = load_csv_pair(args.x, args.y)
    if len(X) != len(Y):
        if not args.truncate:
            raise DataError(f"{args.x} has {len(X)} rows but {args.y} has {len(Y)}; pass --truncate")
        X, Y = truncate_pair(X, Y, args.seed)
    return X, Y


def _entry(args):
    return TestEntry(method=args.method, J=args.J, B=args.B, permutations=args.permutations)


def _split_half(X, Y):
    # first half tunes, second half tests
    h = len(X) // 2
    return (X[:h], Y[:h]), (X[h:], Y[h:])


def cmd_test(args, out):
    X, Y = _load(args)
    test = make_test(_entry(args), args.alpha)
    gamma = args.gamma
    if gamma == "tune":
        (Xt, Yt), (X, Y) = _split_half(X, Y)
        gamma, _ = tuning.select_scaling(test, Xt, Yt, tuning.parse_grid(args.grid), args.reps, "bootstrap", args.seed)
    result = test(X, Y, gamma, args.seed)
    if args.json:
        payload = {
            "statistic": result.statistic,
            "dof": result.dof,
            "p_value": result.p_value,
            "threshold": result.threshold,
            "reject": bool(result.reject),
            "elapsed_s": result.elapsed,
            "gamma": gamma,
            "seed": args.seed,
        }
        out.write(json.dumps(payload) + "\n")
    else:
        out.write(
            f"method={args.method} statistic={result.statistic:.6g} dof={result.dof} "
            f"p_value={result.p_value:.6g} threshold={result.threshold:.6g} "
            f"reject={bool(result.reject)} gamma={gamma:g} elapsed_s={result.elapsed:.4g}\n"
        )
    return EXIT_OK


def cmd_tune(args, out):
    X, Y = _load(args)
    test = make_test(_entry(args), args.alpha)
    gamma, table = tuning.select_scaling(test, X, Y, tuning.parse_grid(args.grid), args.reps, "bootstrap", args.seed)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["log2_gamma", "gamma", "median_p", "upper_quartile_p", "chosen"])
    for s in table:
        w.writerow([f"{s.log2_gamma:g}", repr(s.gamma), repr(s.median), repr(s.upper_quartile), int(s.gamma == gamma)])
    return EXIT_OK


def _write_tuning(records, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["sweep", "test", "log2_gamma", "median_p", "upper_quartile_p", "chosen"])
        for rec in records:
            for s in rec.table:
                w.writerow([rec.sweep_value, rec.test, f"{s.log2_gamma:g}", repr(s.median), repr(s.upper_quartile), int(s.gamma == rec.gamma)])


def _write_meta(config, path):
    meta = {
        "generator": config.generator,
        "n": config.n,
        "D": config.D,
        "noise": config.noise,
        "sweep": config.sweep,
        "values": config.values,
        "replications": config.replications,
        "alpha": config.alpha,
        "seed": config.seed,
        "mmd_cap": config.mmd_cap,
        "tune_grid": config.tune_grid,
        "tune_reps": config.tune_reps,
        "tune_n": config.tune_n,
        "tests": [vars(t) | {"label": t.label()} for t in config.tests],
    }
    if config.generator == "blobs":
        b = config.blobs
        meta["blobs"] = {"grid": b.grid, "spacing": b.spacing, "stretch": b.stretch, "angle": b.angle}
    Path(path).write_text(json.dumps(meta, indent=2) + "\n")


def cmd_experiment(args, out, runner):
    config = load_config(args.config)
    records = []
    rows = runner(config, tuning_log=records)
    if args.out:
        base = Path(args.out)
        with open(base, "w", newline="") as fh:
            write_rows(rows, fh)
        stem = base.with_suffix("")
        if records:
            _write_tuning(records, f"{stem}.tuning.csv")
        _write_meta(config, f"{stem}.meta.json")
    else:
        write_rows(rows, out)
    return EXIT_OK


def _join_grid(argv):
    # "--grid -10:10:1" would otherwise be read as an unknown option
    argv = list(argv)
    for i, tok in enumerate(argv[:-1]):
        if tok == "--grid" and argv[i + 1].startswith("-"):
            argv[i : i + 2] = [f"--grid={argv[i + 1]}"]
            break
    return argv


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(_join_grid(sys.argv[1:] if argv is None else argv))
    try:
        if args.command == "test":
            return cmd_test(args, out)
        if args.command == "tune":
            return cmd_tune(args, out)
        runner = run_power_curve if args.command == "power" else run_type1
        return cmd_experiment(args, out, runner)
    except (DomainError, DataError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SingularMatrixError, ArithmeticError, FloatingPointError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
