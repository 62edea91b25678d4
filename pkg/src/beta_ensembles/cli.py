"""Command-line interface.

Subcommands:
  sample         points of one drawn configuration
  count          raw interval counts across independent trials
  fluctuations   normalized counts plus Gaussian-fit summary
  diagnostics    martingale-CLT hypothesis statistics along an n-grid
  moments        closed-form moment tables of the coefficient laws
  verify         run the end-to-end check suite

Exit codes: 0 success, 1 invalid parameters or usage, 2 numerical failure,
3 verification failure.

Output is CSV (default) or JSON.  CSV starts with '# key=value' comment
lines recording the configuration (never a timestamp, so repeated runs are
byte-identical); JSON carries the same configuration plus a provenance
block whose timestamp is the only run-dependent field.  The worker count is
deliberately not recorded: results are independent of it.  Set
BETA_ENSEMBLE_THREADS to override --parallel globally.
"""

import argparse
import contextlib
import json
import os
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__, acceptance
from ._backend import backend_name
from .distributions import (
    SymBetaParam,
    ThetaParam,
    expected_neg_x2log,
    sym_beta_moments,
    theta_moments,
)
from .diagnostics import hypothesis_traces
from .ensembles import EnsembleSpec, count_trials, sample_points
from .errors import NumericalError, ParameterError
from .seeding import trial_rng
from .statistics import run_fluctuation_experiment, summarize

__all__ = ["main"]


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems through the exit-code contract."""

    def error(self, message):
        raise ParameterError(message)


def _g17(x):
    return format(float(x), ".17g")


def _parse_floats(text):
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ParameterError(f"expected comma-separated numbers, got {text!r}")
    if not values:
        raise ParameterError(f"expected comma-separated numbers, got {text!r}")
    return values


def _parse_ints(text):
    values = _parse_floats(text)
    out = [int(v) for v in values]
    if any(v != int(v) for v in values):
        raise ParameterError(f"expected comma-separated integers, got {text!r}")
    return out


@contextlib.contextmanager
def _out_stream(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _workers(args):
    env = os.environ.get("BETA_ENSEMBLE_THREADS")
    if env is None:
        value = args.parallel
    else:
        try:
            value = int(env)
        except ValueError:
            raise ParameterError(f"BETA_ENSEMBLE_THREADS must be an integer, got {env!r}")
    if value < 1:
        raise ParameterError(f"worker count must be >= 1, got {value}")
    return value


def _config_value(value):
    if isinstance(value, float):
        return _g17(value)
    if isinstance(value, (list, tuple)):
        return ",".join(_config_value(v) for v in value)
    return str(value)


def _write_csv(fh, config, header, rows):
    fh.write(f"# version={__version__}\n")
    fh.write(f"# backend={backend_name()}\n")
    for key, value in config.items():
        fh.write(f"# {key}={_config_value(value)}\n")
    fh.write(",".join(header) + "\n")
    for row in rows:
        fh.write(
            ",".join(
                str(cell) if isinstance(cell, (int, np.integer)) else _g17(cell)
                for cell in row
            )
            + "\n"
        )


def _write_json(fh, config, payload, seed=None):
    doc = {"config": dict(config)}
    doc.update(payload)
    doc["provenance"] = {
        "seed": seed,
        "version": __version__,
        "backend": backend_name(),
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    json.dump(doc, fh, indent=2)
    fh.write("\n")


def _spec_from_args(args):
    if args.ensemble == "jacobi":
        if args.a is None or args.b is None:
            raise ParameterError("jacobi runs need --a and --b")
        return EnsembleSpec(kind="jacobi", n=args.n, beta=args.beta, a=args.a, b=args.b)
    if args.a is not None or args.b is not None:
        raise ParameterError("--a/--b only apply to the jacobi ensemble")
    return EnsembleSpec(kind="circular", n=args.n, beta=args.beta)


def _ensemble_config(args, command):
    config = {"command": command, "ensemble": args.ensemble, "n": args.n,
              "beta": args.beta}
    if args.ensemble == "jacobi":
        config["a"] = args.a
        config["b"] = args.b
    return config


def _interval_labels(kind, thetas):
    if kind == "circular":
        return [f"arc_{j}" for j in range(len(thetas) - 1)], [
            f"({_g17(lo)},{_g17(hi)}]" for lo, hi in zip(thetas[:-1], thetas[1:])
        ]
    return [f"threshold_{j}" for j in range(len(thetas))], [_g17(t) for t in thetas]


def _cmd_sample(args):
    spec = _spec_from_args(args)
    points = sample_points(spec, rng=trial_rng(args.seed, args.trial)).points
    config = _ensemble_config(args, "sample")
    config["seed"] = args.seed
    config["trial"] = args.trial
    with _out_stream(args.out) as fh:
        if args.format == "json":
            _write_json(fh, config, {"points": points.tolist()}, seed=args.seed)
        else:
            _write_csv(fh, config, ["index", "point"], list(enumerate(points)))
    return 0


def _cmd_count(args):
    spec = _spec_from_args(args)
    thetas = _parse_floats(args.thetas)
    counts = count_trials(spec, thetas, args.trials, args.seed, workers=_workers(args))
    config = _ensemble_config(args, "count")
    config["thetas"] = thetas
    config["trials"] = args.trials
    config["seed"] = args.seed
    names, descriptions = _interval_labels(spec.kind, thetas)
    for name, desc in zip(names, descriptions):
        config[name] = desc
    with _out_stream(args.out) as fh:
        if args.format == "json":
            _write_json(fh, config, {"counts": counts.tolist()}, seed=args.seed)
        else:
            rows = [(t, *counts[t]) for t in range(counts.shape[0])]
            _write_csv(fh, config, ["trial", *names], rows)
    return 0


def _report_payload(report):
    return {
        "mean": report.mean.tolist(),
        "covariance": report.covariance.tolist(),
        "ks_distance": report.ks_distance.tolist(),
        "ks_pvalue": report.ks_pvalue.tolist(),
        "skewness": report.skewness.tolist(),
        "excess_kurtosis": report.excess_kurtosis.tolist(),
        "trials": report.trials,
        "n": report.n,
        "beta": report.beta,
    }


def _cmd_fluctuations(args):
    spec = _spec_from_args(args)
    thetas = _parse_floats(args.thetas)
    sample = run_fluctuation_experiment(
        spec, thetas, args.trials, args.seed,
        normalization=args.normalization, workers=_workers(args),
    )
    report = summarize(sample)
    config = _ensemble_config(args, "fluctuations")
    config["thetas"] = thetas
    config["trials"] = args.trials
    config["seed"] = args.seed
    config["normalization"] = args.normalization
    names, descriptions = _interval_labels(spec.kind, thetas)
    for name, desc in zip(names, descriptions):
        config[name] = desc
    with _out_stream(args.out) as fh:
        if args.format == "json":
            payload = {
                "values": sample.values.tolist(),
                "report": _report_payload(report),
            }
            _write_json(fh, config, payload, seed=args.seed)
        else:
            _write_csv(fh, config, names, sample.values)
    if args.emit_plot_script:
        _fluctuation_plot_script(args, names[0])
    return 0


def _fluctuation_plot_script(args, first_column):
    if args.out in (None, "-") or args.format != "csv":
        raise ParameterError("--emit-plot-script needs --out FILE with the csv format")
    with open(args.emit_plot_script, "w") as fh:
        fh.write(
            "\n".join(
                [
                    "set datafile separator comma",
                    "set key autotitle columnhead left top",
                    "set xlabel 'normalized count'",
                    "set ylabel 'cumulative probability'",
                    f"trials = {args.trials}.0",
                    f"plot '{args.out}' using 1:(1.0/trials) smooth cumulative "
                    f"title '{first_column} ECDF', norm(x) lw 2 title 'standard normal'",
                    "",
                ]
            )
        )


def _cmd_diagnostics(args):
    if args.ensemble == "jacobi" and (args.a is None or args.b is None):
        raise ParameterError("jacobi runs need --a and --b")
    if args.ensemble == "circular" and (args.a is not None or args.b is not None):
        raise ParameterError("--a/--b only apply to the jacobi ensemble")
    n_grid = _parse_ints(args.n_grid)
    theta_pair = None
    if (args.theta1 is None) != (args.theta2 is None):
        raise ParameterError("give both --theta1 and --theta2 or neither")
    if args.theta1 is not None:
        theta_pair = (args.theta1, args.theta2)
    traces = hypothesis_traces(
        args.ensemble, args.beta, n_grid, args.trials, args.seed,
        a=args.a, b=args.b, theta_pair=theta_pair,
    )
    config = {"command": "diagnostics", "ensemble": args.ensemble, "beta": args.beta}
    if args.ensemble == "jacobi":
        config["a"] = args.a
        config["b"] = args.b
    config["n_grid"] = n_grid
    config["trials"] = args.trials
    config["seed"] = args.seed
    if theta_pair is not None:
        config["theta1"], config["theta2"] = theta_pair
    for trace in traces:
        config[f"target_{trace.label}"] = trace.target
    with _out_stream(args.out) as fh:
        if args.format == "json":
            payload = {
                "traces": [
                    {
                        "label": t.label,
                        "target": t.target,
                        "n": t.n_values.tolist(),
                        "values": t.values.tolist(),
                    }
                    for t in traces
                ]
            }
            _write_json(fh, config, payload, seed=args.seed)
        else:
            header = ["n", *(t.label for t in traces)]
            rows = [
                (int(traces[0].n_values[i]), *(t.values[i] for t in traces))
                for i in range(len(n_grid))
            ]
            _write_csv(fh, config, header, rows)
    if args.emit_plot_script:
        _diagnostics_plot_script(args, traces)
    return 0


def _diagnostics_plot_script(args, traces):
    if args.out in (None, "-") or args.format != "csv":
        raise ParameterError("--emit-plot-script needs --out FILE with the csv format")
    curves = ", ".join(
        f"'{args.out}' using 1:{j + 2} with linespoints" if j == 0
        else f"'' using 1:{j + 2} with linespoints"
        for j in range(len(traces))
    )
    with open(args.emit_plot_script, "w") as fh:
        fh.write(
            "\n".join(
                [
                    "set datafile separator comma",
                    "set key autotitle columnhead",
                    "set logscale x 2",
                    "set xlabel 'n'",
                    "set ylabel 'statistic'",
                    f"target = {_g17(traces[0].target)}",
                    f"plot {curves}, target with lines dashtype 2 "
                    "title 'diagonal target'",
                    "",
                ]
            )
        )


def _cmd_moments(args):
    if args.law == "disk":
        if args.nu is None:
            raise ParameterError("disk moments need --nu")
        m2, m4 = theta_moments(ThetaParam(args.nu))
        config = {"command": "moments", "law": "disk", "nu": args.nu}
        table = {"abs2_mean": m2, "abs4_mean": m4}
    else:
        if args.s is None or args.t is None:
            raise ParameterError("symmetric-beta moments need --s and --t")
        p = SymBetaParam(args.s, args.t)
        mom = sym_beta_moments(p)
        config = {"command": "moments", "law": "symbeta", "s": args.s, "t": args.t}
        table = {
            "m1": mom.m1,
            "m2": mom.m2,
            "m3": mom.m3,
            "m4": mom.m4,
            "var": mom.var,
            "neg_x2log_mean": expected_neg_x2log(p),
        }
    with _out_stream(args.out) as fh:
        if args.format == "json":
            _write_json(fh, config, {"moments": table})
        else:
            _write_csv(fh, config, list(table), [tuple(table.values())])
    return 0


def _cmd_verify(args):
    if args.list:
        for name in acceptance.check_names():
            print(name)
        return 0
    names = None
    if args.only:
        names = _split_names(args.only)
    results = acceptance.run_checks(names=names, quick=args.quick, log=print)
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)} passed, {len(failed)} failed")
    if args.out:
        with _out_stream(args.out) as fh:
            payload = {
                "results": [
                    {"name": r.name, "passed": r.passed, "detail": r.detail,
                     "seconds": round(r.seconds, 3)}
                    for r in results
                ]
            }
            _write_json(fh, {"command": "verify", "quick": args.quick}, payload)
    return 3 if failed else 0


def _split_names(text):
    names = [tok.strip() for tok in text.split(",") if tok.strip()]
    known = set(acceptance.check_names())
    for name in names:
        if name not in known:
            raise ParameterError(
                f"unknown check {name!r}; run 'verify --list' for the catalogue"
            )
    return names


def _add_output_options(sub):
    sub.add_argument("--out", default="-", help="output file, '-' for stdout")
    sub.add_argument("--format", choices=["csv", "json"], default="csv")


def _add_ensemble_options(sub):
    sub.add_argument("--ensemble", choices=["circular", "jacobi"], required=True)
    sub.add_argument("--n", type=int, required=True, help="number of points")
    sub.add_argument("--beta", type=float, required=True)
    sub.add_argument("--a", type=float, help="jacobi weight exponent a > 0")
    sub.add_argument("--b", type=float, help="jacobi weight exponent b > 0")


def build_parser():
    parser = _Parser(prog="beta-ensembles", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    parser.set_defaults(func=None)
    subs = parser.add_subparsers(dest="subcommand")

    sample = subs.add_parser("sample", help="points of one drawn configuration")
    _add_ensemble_options(sample)
    sample.add_argument("--seed", type=int, default=0)
    sample.add_argument("--trial", type=int, default=0,
                        help="trial index within the seed stream")
    _add_output_options(sample)
    sample.set_defaults(func=_cmd_sample)

    count = subs.add_parser("count", help="raw interval counts across trials")
    _add_ensemble_options(count)
    count.add_argument("--thetas", required=True,
                       help="comma-separated angles: circular arc endpoints "
                            "in (-pi,pi), or jacobi thresholds in (0,pi); "
                            "write --thetas=-1.0,1.0 when the first is negative")
    count.add_argument("--trials", type=int, default=1000)
    count.add_argument("--seed", type=int, default=0)
    count.add_argument("--parallel", type=int, default=1,
                       help="worker processes (results do not depend on it)")
    _add_output_options(count)
    count.set_defaults(func=_cmd_count)

    fluct = subs.add_parser("fluctuations",
                            help="normalized counts and Gaussian-fit summary")
    _add_ensemble_options(fluct)
    fluct.add_argument("--thetas", required=True,
                       help="comma-separated angles, as for count")
    fluct.add_argument("--trials", type=int, default=1000)
    fluct.add_argument("--seed", type=int, default=0)
    fluct.add_argument("--normalization", choices=["theorem", "section4"],
                       default="theorem")
    fluct.add_argument("--parallel", type=int, default=1)
    fluct.add_argument("--emit-plot-script", metavar="PATH",
                       help="also write a gnuplot script rendering the CSV")
    _add_output_options(fluct)
    fluct.set_defaults(func=_cmd_fluctuations)

    diag = subs.add_parser("diagnostics",
                           help="martingale-CLT hypothesis statistics")
    diag.add_argument("--ensemble", choices=["circular", "jacobi"], required=True)
    diag.add_argument("--beta", type=float, required=True)
    diag.add_argument("--a", type=float)
    diag.add_argument("--b", type=float)
    diag.add_argument("--n-grid", required=True,
                      help="comma-separated grid of summand counts")
    diag.add_argument("--trials", type=int, default=100)
    diag.add_argument("--seed", type=int, default=0)
    diag.add_argument("--theta1", type=float)
    diag.add_argument("--theta2", type=float)
    diag.add_argument("--emit-plot-script", metavar="PATH",
                      help="also write a gnuplot script rendering the CSV")
    _add_output_options(diag)
    diag.set_defaults(func=_cmd_diagnostics)

    moments = subs.add_parser("moments", help="closed-form coefficient moments")
    moments.add_argument("--law", choices=["disk", "symbeta"], required=True)
    moments.add_argument("--nu", type=float, help="disk law parameter nu > 1")
    moments.add_argument("--s", type=float, help="symmetric-beta shape s > 0")
    moments.add_argument("--t", type=float, help="symmetric-beta shape t > 0")
    _add_output_options(moments)
    moments.set_defaults(func=_cmd_moments)

    verify = subs.add_parser("verify", help="run the end-to-end check suite")
    verify.add_argument("--quick", action="store_true",
                        help="only the fast deterministic checks")
    verify.add_argument("--list", action="store_true",
                        help="print check names and exit")
    verify.add_argument("--only", help="comma-separated subset of checks")
    verify.add_argument("--out", help="also write results as JSON")
    verify.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.func is None:
            parser.print_usage(sys.stderr)
            return 1
        return args.func(args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
