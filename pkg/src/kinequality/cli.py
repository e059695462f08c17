"""Command-line interface.

Exit codes: 0 success, 2 usage error, 3 input validation, 4 numeric failure.
The default seed may be overridden by the ``KINEQUALITY_SEED`` environment
variable; an explicit ``--seed`` always wins.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import analytic, fitting, kinetic
from .errors import NumericError, ValidationError
from .metrics import build_lorenz, indices_report
from .pipeline import (
    FORMATS, GKRecord, GKScatter, fit_gk_line, fmt6, load_dataset, num6,
    scatter_to_csv, scatter_to_json,
)

EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_NUMERIC = 4
SEED_ENV = "KINEQUALITY_SEED"


class UsageError(Exception):
    pass


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 42
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def parse_grid(text: str) -> list[float]:
    """``start:stop:count`` -> ``count`` evenly spaced values, endpoints included."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"grid must be start:stop:count, got {text!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}") from None
    if count < 1:
        raise argparse.ArgumentTypeError("grid count must be >= 1")
    if count == 1:
        return [start]
    return [round(v, 12) for v in np.linspace(start, stop, count)]


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _emit(text: str, output: str | None):
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _emit_scatter(args, scatter: GKScatter, fit=None, **extra):
    if args.format == "csv":
        _emit(scatter_to_csv(scatter), args.output)
    else:
        _emit(scatter_to_json(scatter, fit, **extra), args.output)


def _emit_dict(args, doc: dict):
    if args.format == "csv":
        keys = list(doc)
        text = ",".join(keys) + "\n" + ",".join(fmt6(doc[k]) if not isinstance(doc[k], str)
                                                 else doc[k] for k in keys) + "\n"
    else:
        text = json.dumps({k: num6(v) if not isinstance(v, str) else v
                           for k, v in doc.items()}, indent=2) + "\n"
    _emit(text, args.output)


def _write_plot_files(args, values):
    if getattr(args, "lorenz_output", None):
        curve = build_lorenz(values)
        lines = ["x,y"] + [f"{x!r},{y!r}" for x, y in zip(curve.x.tolist(), curve.y.tolist())]
        Path(args.lorenz_output).write_text("\n".join(lines) + "\n", encoding="utf-8")
    if getattr(args, "histogram_output", None):
        positive = np.asarray(values)[np.asarray(values) > 0]
        h = fitting.log_binned_histogram(positive, args.bins_per_decade)
        lines = ["left,right,density"] + [
            f"{a!r},{b!r},{d!r}" for a, b, d in
            zip(h.bin_edges[:-1].tolist(), h.bin_edges[1:].tolist(), h.densities.tolist())]
        Path(args.histogram_output).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _schedule(args) -> kinetic.SimulationSchedule:
    return kinetic.SimulationSchedule(args.therm_sweeps, args.sample_count, args.sample_stride)


# -- subcommands -------------------------------------------------------------------

def cmd_metrics(args):
    ds = load_dataset(args.input, args.input_format)
    rep = indices_report(ds.values)
    scatter = GKScatter([GKRecord(ds.id, None, rep.g, rep.k, rep.n)])
    _emit_scatter(args, scatter, mean=num6(rep.mean))
    _write_plot_files(args, ds.values)


def cmd_simulate(args):
    if args.model == "cc":
        if args.delta is not None:
            raise UsageError("--delta applies to --model ccm only")
        params = kinetic.CCParams(args.lam if args.lam is not None else 0.0, args.agents, args.seed)
        param = params.lam
    else:
        if args.lam is not None:
            raise UsageError("--lambda applies to --model cc only")
        params = kinetic.CCMParams(args.delta if args.delta is not None else 0.0,
                                   args.agents, args.seed)
        param = params.delta
    sample = kinetic.run_steady_state(params, _schedule(args))
    rep = sample.report
    scatter = GKScatter([GKRecord(args.model, param, rep.g, rep.k, rep.n)])
    _emit_scatter(args, scatter, mean=num6(rep.mean), seed=args.seed)
    if args.wealth_output:
        text = "\n".join(repr(v) for v in sample.pooled_wealth.tolist()) + "\n"
        Path(args.wealth_output).write_text(text, encoding="utf-8")
    _write_plot_files(args, sample.pooled_wealth)


def cmd_sweep(args):
    schedule = _schedule(args)
    if args.model == "cc":
        if args.lambda_grid is None:
            raise UsageError("--model cc requires --lambda-grid")
        scatter = kinetic.sweep_lambda(args.lambda_grid, args.agents, schedule, args.seed,
                                       parallel=args.parallel, max_workers=args.workers)
    else:
        if args.delta_grid is None:
            raise UsageError("--model ccm requires --delta-grid")
        scatter = kinetic.sweep_delta(args.delta_grid, args.agents, schedule, args.seed,
                                      args.quenched_configs, parallel=args.parallel,
                                      max_workers=args.workers)
    fit = None
    if len(scatter) >= 2:
        try:
            fit = fit_gk_line(scatter, args.g_max)
        except ValidationError as exc:
            print(f"warning: line fit skipped: {exc}", file=sys.stderr)
    _emit_scatter(args, scatter, fit, seed=args.seed)


def cmd_fit(args):
    ds = load_dataset(args.input, args.input_format)
    values = ds.values
    dropped = 0
    if args.kind == "lognormal":
        if args.rescale:
            rs = fitting.rescale_by_mean(values)
            values, dropped = rs.values, rs.dropped_zeros
        else:
            dropped = int(np.sum(values == 0))
            values = values[values > 0]
        res = fitting.fit_lognormal(values)
        doc = {"mu": res.mu, "sigma": res.sigma, "n_used": res.n_used, "dropped_zeros": dropped}
    else:
        dropped = int(np.sum(values == 0))
        res = fitting.fit_powerlaw_tail(values[values > 0], args.min_tail, args.xmin)
        doc = {"alpha": res.alpha, "xmin": res.xmin, "n_tail": res.n_tail, "ks": res.ks,
               "dropped_zeros": dropped}
    _emit_dict(args, doc)


def cmd_analytic(args):
    fam = args.family
    if fam == "power":
        param = args.p if args.p is not None else 2.0
        g, k = analytic.gk_power(param)
    elif fam == "arc":
        param = args.t if args.t is not None else 0.0
        g, k = analytic.gk_circle_arc(param)
    elif fam == "lognormal":
        if args.sigma is None:
            raise UsageError("--family lognormal requires --sigma")
        param = args.sigma
        g, k = analytic.gk_lognormal(param)
    else:
        param = None
        g, k = analytic.gk_exponential()
    _emit_scatter(args, GKScatter([GKRecord(fam, param, g, k, None)]))


# -- parser ------------------------------------------------------------------------

def _add_output(p):
    p.add_argument("--output", "-o", help="write results here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json",
                   help="output format (default: json)")


def _add_plot_outputs(p):
    p.add_argument("--lorenz-output", help="write Lorenz curve points (x,y) as CSV")
    p.add_argument("--histogram-output", help="write a log-binned density histogram as CSV")
    p.add_argument("--bins-per-decade", type=_positive_int, default=10)


def _add_schedule(p, seed_default):
    d = kinetic.SimulationSchedule()
    p.add_argument("--agents", type=_positive_int, default=1000)
    p.add_argument("--therm-sweeps", type=_positive_int, default=d.therm_sweeps)
    p.add_argument("--sample-count", type=_positive_int, default=d.sample_count)
    p.add_argument("--sample-stride", type=_positive_int, default=d.sample_stride)
    p.add_argument("--seed", type=int, default=seed_default)


def build_parser(seed_default: int = 42) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kinequality",
        description="Gini / Kolkata indices, kinetic exchange simulations and tail fits.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("metrics", help="g and k indices of a data file")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--input-format", choices=FORMATS, default="one-column")
    _add_output(p)
    _add_plot_outputs(p)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("simulate", help="steady state of one CC or CCM run")
    p.add_argument("--model", choices=("cc", "ccm"), required=True)
    p.add_argument("--lambda", dest="lam", type=float, help="CC saving propensity in [0, 1)")
    p.add_argument("--delta", type=float, help="CCM saving-distribution exponent, > -1")
    _add_schedule(p, seed_default)
    p.add_argument("--wealth-output", help="write pooled wealth, one value per line")
    _add_output(p)
    _add_plot_outputs(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="(g, k) scatter over a parameter grid, with line fit")
    p.add_argument("--model", choices=("cc", "ccm"), required=True)
    p.add_argument("--lambda-grid", type=parse_grid, help="start:stop:count")
    p.add_argument("--delta-grid", type=parse_grid, help="start:stop:count")
    p.add_argument("--quenched-configs", type=_positive_int, default=1)
    p.add_argument("--g-max", type=float, default=0.70, help="upper g bound of the line fit")
    p.add_argument("--parallel", action="store_true", help="run grid points concurrently")
    p.add_argument("--workers", type=_positive_int, default=None)
    _add_schedule(p, seed_default)
    _add_output(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fit", help="lognormal or power-law-tail fit of a data file")
    p.add_argument("kind", choices=("lognormal", "tail"))
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--input-format", choices=FORMATS, default="one-column")
    p.add_argument("--rescale", action="store_true",
                   help="lognormal: divide by the sample mean before fitting")
    p.add_argument("--min-tail", type=_positive_int, default=fitting.DEFAULT_MIN_TAIL)
    p.add_argument("--xmin", type=float, default=None, help="tail: fixed cutoff")
    _add_output(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("analytic", help="(g, k) of a closed-form Lorenz family")
    p.add_argument("--family", choices=("power", "arc", "exponential", "lognormal"),
                   required=True)
    p.add_argument("--p", type=float, help="power exponent (default 2)")
    p.add_argument("--t", type=float, help="arc centre parameter (default 0)")
    p.add_argument("--sigma", type=float, help="lognormal shape")
    _add_output(p)
    p.set_defaults(func=cmd_analytic)
    return parser


def main(argv=None) -> int:
    try:
        parser = build_parser(_default_seed())
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        name = exc.filename if exc.filename is not None else ""
        print(f"error: cannot read {name}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericError, ArithmeticError) as exc:
        print(f"error: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return 0


if __name__ == "__main__":
    sys.exit(main())
