"""Command-line interface.

Exit codes: 0 success, 2 usage or input error, 3 numerical or degenerate data.
"""
import argparse
import json
import sys

import numpy as np

from . import io
from .core import ForecaConfig, foreca_fit, transform
from .errors import DimensionError, ForecaError, InputError, SingularCovarianceError
from .forecastability import omega_series
from .spectrum import WosaConfig, normalize_density, sample_acf, wosa_univariate

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL = 0, 2, 3


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {value}")
    return value


def _segment_length(text):
    value = _positive_int(text)
    if value % 2:
        raise argparse.ArgumentTypeError(f"segment length must be even, got {value}")
    return value


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _add_input(p):
    p.add_argument("input", help="CSV file, one series per column")
    p.add_argument("--delimiter", default=",", help="field delimiter (default: comma)")
    hdr = p.add_mutually_exclusive_group()
    hdr.add_argument("--header", dest="header", action="store_true", default=None,
                     help="first row holds column names")
    hdr.add_argument("--no-header", dest="header", action="store_false",
                     help="first row is data (default: detect)")


def _add_wosa(p):
    p.add_argument("--segment-length", type=_segment_length, default=None,
                   help="WOSA segment length (even; default derived from series length)")


def _add_format(p):
    p.add_argument("--format", choices=("table", "json"), default="table")


def build_parser():
    parser = argparse.ArgumentParser(prog="foreca", description="Forecastable component analysis.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("omega", help="per-column forecastability")
    _add_input(p)
    _add_wosa(p)
    _add_format(p)
    p.add_argument("--columns", default=None, help="comma-separated names or 0-based indices")
    p.add_argument("--strict", action="store_true", help="exit 3 if any column fails")

    p = sub.add_parser("fit", help="fit forecastable components and write a model file")
    _add_input(p)
    _add_wosa(p)
    _add_format(p)
    p.add_argument("--components", "-k", type=_positive_int, default=None,
                   help="number of components (default: all)")
    p.add_argument("--restarts", type=_positive_int, default=5)
    p.add_argument("--tol", type=_positive_float, default=1e-8)
    p.add_argument("--max-iter", type=_positive_int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", "-o", required=True, help="model file to write")

    p = sub.add_parser("transform", help="apply a fitted model")
    _add_input(p)
    p.add_argument("--model", "-m", required=True)
    p.add_argument("--output", "-o", default=None, help="CSV to write (default: stdout)")

    p = sub.add_parser("spectrum", help="spectral density and sample ACF of one column")
    _add_input(p)
    _add_wosa(p)
    _add_format(p)
    p.add_argument("--column", default="0", help="column name or 0-based index (default: first)")
    p.add_argument("--acf-lags", type=int, default=40)
    return parser


def _read(args):
    return io.read_dataset(args.input, delimiter=args.delimiter, header=args.header)


def _table(header, rows):
    cells = [header] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells) + "\n"


def cmd_omega(args, out):
    values, names = _read(args)
    selection = args.columns.split(",") if args.columns else None
    cfg = WosaConfig(args.segment_length)
    records, failed = [], False
    for j in io.select_columns(names, selection):
        try:
            om = omega_series(values[:, j], cfg)
            records.append({"column": names[j], "omega": om.omega, "n_bins": om.n_bins,
                            "segment_length": 2 * om.n_bins})
        except ForecaError as exc:
            failed = True
            records.append({"column": names[j], "omega": None, "n_bins": None,
                            "segment_length": None, "error": str(exc)})
    if args.format == "json":
        out.write(json.dumps(records, indent=2) + "\n")
    else:
        rows = [[r["column"], "error: " + r["error"] if "error" in r else f"{r['omega']:.6f}",
                 r["n_bins"] if r["n_bins"] is not None else "-",
                 r["segment_length"] if r["segment_length"] is not None else "-"] for r in records]
        out.write(_table(["column", "omega", "n_bins", "segment_length"], rows))
    if failed and args.strict:
        raise CliError("one or more columns could not be evaluated", EXIT_NUMERICAL)


def cmd_fit(args, out):
    values, names = _read(args)
    n = values.shape[1]
    K = args.components if args.components is not None else n
    if K > n:
        raise CliError(f"--components {K} exceeds the number of columns ({n})", EXIT_USAGE)
    config = ForecaConfig(n_restarts=args.restarts, tol=args.tol, max_iter=args.max_iter,
                          seed=args.seed, wosa=WosaConfig(args.segment_length))
    try:
        model = foreca_fit(values, K, config, columns=names)
    except SingularCovarianceError as exc:
        cols = [names[i] for i in exc.columns]
        raise CliError(f"singular covariance; near-constant or collinear columns: {', '.join(cols)}",
                       EXIT_NUMERICAL) from exc
    io.save_model(model, args.output)
    rows = [
        {"component": f"ForeC{k + 1}", "omega": float(model.omega[k]), "lambda_min": float(model.lambda_min[k]),
         "iterations": t.iterations, "converged": t.converged}
        for k, t in enumerate(model.traces)
    ]
    if args.format == "json":
        out.write(json.dumps(rows, indent=2) + "\n")
    else:
        out.write(_table(["component", "omega", "lambda_min", "iterations", "converged"],
                         [[r["component"], f"{r['omega']:.6f}", f"{r['lambda_min']:.6f}",
                           r["iterations"], r["converged"]] for r in rows]))


def cmd_transform(args, out):
    model = io.load_model(args.model)
    values, _ = _read(args)
    try:
        y = transform(values, model)
    except DimensionError as exc:
        raise CliError(str(exc), EXIT_NUMERICAL) from exc
    text = io.format_csv([f"ForeC{k + 1}" for k in range(y.shape[1])], y.tolist())
    if args.output:
        io.atomic_write(args.output, text)
    else:
        out.write(text)


def cmd_spectrum(args, out):
    values, names = _read(args)
    (j,) = io.select_columns(names, [args.column])
    y = values[:, j]
    if np.ptp(y) == 0:
        raise CliError(f"column {names[j]} is constant", EXIT_NUMERICAL)
    density = normalize_density(wosa_univariate(y, WosaConfig(args.segment_length)))
    lags = min(args.acf_lags, y.shape[0] - 1)
    acf = sample_acf(y, lags)
    freqs = density.grid.frequencies
    if args.format == "json":
        doc = {"column": names[j], "frequency": freqs.tolist(), "density": density.values.tolist(),
               "lag": acf.lags.tolist(), "rho": acf.rho.tolist()}
        out.write(json.dumps(doc) + "\n")
    else:
        out.write(io.format_csv(["frequency", "density"], zip(freqs.tolist(), density.values.tolist())))
        out.write("\n")
        out.write(io.format_csv(["lag", "rho"], zip(acf.lags.tolist(), acf.rho.tolist())))


COMMANDS = {"omega": cmd_omega, "fit": cmd_fit, "transform": cmd_transform, "spectrum": cmd_spectrum}


def main(argv=None, out=None):
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code
    try:
        COMMANDS[args.command](args, out)
    except CliError as exc:
        print(f"foreca: error: {exc}", file=sys.stderr)
        return exc.code
    except InputError as exc:
        print(f"foreca: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ForecaError as exc:
        print(f"foreca: error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
