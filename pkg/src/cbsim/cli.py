"""``cbsim`` command line: config parsing, sweeps, closed-form bounds, CSV output.

Config files are line-oriented ``key = value`` pairs (several pairs may share
a line), ``#`` starts a comment, lists are comma-separated::

    B = 3
    nT = 8
    nR = 4
    alpha = 1.0  beta = 0.0  np = inf
    snr_db = 0,5,10,15,20,25,30
    schemes = ia, max_sinr, wmmse, reconfigurable
"""

import argparse
import csv
import io
import math
import os
import re
import sys
from dataclasses import replace

from .errors import (ConfigParseError, ConfigValidationError, InvalidArgumentError,
                     NumericalFailureError)
from .metrics import theory_bounds
from .model import PERFECT_CSI, ClusterConfig, Scenario, db_to_linear
from .schemes import SCHEMES
from .simulate import run_sweep

__all__ = ["parse_config", "emit_csv", "parse_csv", "bounds_csv", "main"]

CSV_HEADER = ("scheme", "snr_db", "alpha", "beta", "m", "np", "trial", "sum_rate_bps_hz")
BOUNDS_HEADER = ("snr_db", "full_reuse", "orthogonal", "ia", "jt")

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

_REQUIRED = ("B", "nT", "nR", "alpha", "beta", "np", "snr_db")


def _float(text):
    return float(text)


def _int(text):
    value = float(text)
    if not value.is_integer():
        raise ValueError(f"{text!r} is not an integer")
    return int(value)


def _int_list(text):
    return [_int(t) for t in text.split(",")]


def _float_list(text):
    return [_float(t) for t in text.split(",") if t]


def _pilots(text):
    if text.lower() in ("inf", "infinite", "perfect"):
        return PERFECT_CSI
    return _int(text)


def _names(text):
    return [t for t in text.split(",") if t]


_KEYS = {
    "B": _int,
    "nT": _int_list,
    "nR": _int_list,
    "P": _float,
    "alpha": _float,
    "beta": _float,
    "m": _float,
    "np": _pilots,
    "snr_db": _float_list,
    "trials": _int,
    "seed": _int,
    "max_iters": _int,
    "tol": _float,
    "lam": _float,
    "gamma_min_db": _float,
    "streams": _int_list,
    "ia_max_iters": _int,
    "schemes": _names,
}


_RANGES = {
    "B": (lambda v: v >= 1, "must be >= 1"),
    "nT": (lambda v: all(x >= 1 for x in v), "antenna counts must be >= 1"),
    "nR": (lambda v: all(x >= 1 for x in v), "antenna counts must be >= 1"),
    "P": (lambda v: v > 0, "must be > 0"),
    "alpha": (lambda v: 0.0 <= v <= 1.0, "must lie in [0, 1]"),
    "beta": (lambda v: 0.0 <= v <= 1.0, "must lie in [0, 1]"),
    "m": (lambda v: v >= 0.5, "Nakagami shape must be >= 0.5"),
    "np": (lambda v: v >= 1, "must be >= 1 or inf"),
    "snr_db": (lambda v: len(v) >= 1 and all(math.isfinite(s) for s in v),
               "needs at least one finite SNR point"),
    "trials": (lambda v: v >= 1, "must be >= 1"),
    "seed": (lambda v: 0 <= v < 2 ** 64, "must be an unsigned 64-bit integer"),
    "max_iters": (lambda v: v >= 1, "must be >= 1"),
    "ia_max_iters": (lambda v: v >= 1, "must be >= 1"),
    "tol": (lambda v: v > 0, "must be > 0"),
    "lam": (lambda v: 0.0 <= v <= 1.0, "must lie in [0, 1]"),
    "gamma_min_db": (lambda v: not math.isnan(v), "must be a number"),
    "streams": (lambda v: all(x >= 1 for x in v), "must be >= 1"),
    "schemes": (lambda v: len(v) >= 1, "at least one scheme is required"),
}


def _tokens(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        line = re.sub(r"\s*=\s*", "=", line)
        line = re.sub(r"\s*,\s*", ",", line).strip()
        if not line:
            continue
        for token in line.split():
            key, sep, value = token.partition("=")
            if not sep or not key or "=" in value:
                raise ConfigParseError(f"expected key=value, got {token!r}", lineno)
            yield lineno, key, value


def _check(key, ok, message):
    if not ok:
        raise ConfigValidationError(key, message)


def parse_config(text):
    """Parse config text into ``(ClusterConfig, Scenario, schemes)``.

    Raises
    ------
    ConfigParseError
        Malformed syntax (carries the line number).
    ConfigValidationError
        Unknown, missing, or out-of-range keys (carries the key).
    """
    values = {}
    for lineno, key, raw in _tokens(text):
        if key not in _KEYS:
            raise ConfigValidationError(key, "unknown key")
        if key in values:
            raise ConfigParseError(f"duplicate key {key!r}", lineno)
        try:
            values[key] = _KEYS[key](raw) if raw or key == "schemes" else None
        except ValueError as exc:
            raise ConfigValidationError(key, f"cannot parse {raw!r}: {exc}") from None
        if values[key] is None:
            raise ConfigValidationError(key, "missing value")
        ok, message = _RANGES[key]
        _check(key, ok(values[key]), message)
    for key in _REQUIRED:
        _check(key, key in values, "required key is missing")

    B = values["B"]
    for key in ("nT", "nR"):
        v = values[key]
        _check(key, len(v) in (1, B), f"needs 1 or {B} entries")
        values[key] = tuple(v * B if len(v) == 1 else v)
    streams = values.get("streams")
    if streams is not None:
        _check("streams", len(streams) in (1, B), f"needs 1 or {B} entries")
        streams = tuple(streams * B if len(streams) == 1 else streams)
        for b, s in enumerate(streams):
            _check("streams", s <= min(values["nT"][b], values["nR"][b]),
                   "must not exceed min(nT, nR)")
    schemes = values.get("schemes", list(SCHEMES))
    for s in schemes:
        _check("schemes", s in SCHEMES, f"unknown scheme {s!r}")

    P = values.get("P", 1.0)
    snr_grid = tuple(values["snr_db"])
    cfg = ClusterConfig(B, values["nT"], values["nR"], P, P / float(db_to_linear(snr_grid[0])))
    scenario = Scenario(
        alpha=values["alpha"], beta=values["beta"], m=values.get("m", 1.0), Np=values["np"],
        snr_grid=snr_grid, trials=values.get("trials", 100), master_seed=values.get("seed", 0),
        max_iters=values.get("max_iters", 10), tol=values.get("tol", 1e-4),
        lam=values.get("lam", 0.5), gamma_min_db=values.get("gamma_min_db", 0.0),
        streams=streams, ia_max_iters=values.get("ia_max_iters", 500))
    return cfg, scenario, list(schemes)


def _fmt(x):
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".9g")


def emit_csv(table):
    """Render a :class:`ResultTable` as CSV text (trial rows, then mean/stderr)."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    common = (_fmt(table.alpha), _fmt(table.beta), _fmt(table.m), _fmt(table.Np))
    rows = list(table.trials)
    for i, t in enumerate(rows):
        writer.writerow((t.scheme, _fmt(t.snr_db)) + common + (str(t.trial), _fmt(t.sum_rate)))
        last = i + 1 == len(rows) or (rows[i + 1].scheme, rows[i + 1].snr_db) != (t.scheme, t.snr_db)
        if last:
            agg = table.aggregates[(t.scheme, t.snr_db)]
            writer.writerow((t.scheme, _fmt(t.snr_db)) + common + ("mean", _fmt(agg.mean)))
            writer.writerow((t.scheme, _fmt(t.snr_db)) + common + ("stderr", _fmt(agg.stderr)))
    return out.getvalue()


def parse_csv(text):
    """Read ``emit_csv`` output back into a list of row dicts with numeric fields."""
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_HEADER:
        raise ConfigParseError(f"unexpected CSV header {reader.fieldnames}")
    rows = []
    for row in reader:
        parsed = {"scheme": row["scheme"], "trial": row["trial"]}
        for key in ("snr_db", "alpha", "beta", "m", "np", "sum_rate_bps_hz"):
            parsed[key] = float(row[key])
        if row["trial"] not in ("mean", "stderr"):
            parsed["trial"] = int(row["trial"])
        rows.append(parsed)
    return rows


def bounds_csv(snr_db, alpha, beta):
    """CSV of the two-cell closed-form sum rates over an SNR grid in dB."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(BOUNDS_HEADER)
    for s in snr_db:
        snr = 0.0 if s == -math.inf else float(db_to_linear(s))
        r = theory_bounds(snr, alpha, beta)
        writer.writerow((_fmt(s), _fmt(r.full_reuse), _fmt(r.orthogonal), _fmt(r.ia), _fmt(r.jt)))
    return out.getvalue()


def _write(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _workers(arg):
    env = os.environ.get("CBSIM_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigValidationError("CBSIM_WORKERS", f"not an integer: {env!r}") from None
    return max(1, arg)


def _cmd_run(args):
    cfg, scenario, schemes = parse_config(_read(args.config))
    overrides = {}
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.trials is not None:
        overrides["trials"] = args.trials
    if overrides:
        scenario = replace(scenario, **overrides)
    table = run_sweep(cfg, scenario, schemes, workers=_workers(args.workers))
    _write(emit_csv(table), args.out)
    if table.failure_rate > 0.5:
        print(f"cbsim: numerical failures in {table.failure_rate:.0%} of trials", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def _cmd_bounds(args):
    try:
        grid = [float(s) for s in args.snr_db.split(",") if s.strip()]
    except ValueError:
        raise ConfigValidationError("snr-db", f"cannot parse {args.snr_db!r}") from None
    for key, v in (("alpha", args.alpha), ("beta", args.beta)):
        _check(key, 0.0 <= v <= 1.0, "must lie in [0, 1]")
    _write(bounds_csv(grid, args.alpha, args.beta), args.out)
    return EXIT_OK


def _cmd_validate(args):
    cfg, scenario, schemes = parse_config(_read(args.config))
    print(f"ok: B={cfg.B} nT={list(cfg.nT)} nR={list(cfg.nR)} "
          f"snr_db={list(scenario.snr_grid)} schemes={schemes}")
    return EXIT_OK


def _u64(text):
    value = int(text, 0)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def build_parser():
    parser = argparse.ArgumentParser(prog="cbsim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a Monte Carlo sweep from a config file")
    run.add_argument("--config", required=True)
    run.add_argument("--seed", type=_u64, default=None, help="master seed (overrides config)")
    run.add_argument("--out", default="-")
    run.add_argument("--trials", type=int, default=None)
    run.add_argument("--workers", type=int, default=1)
    run.set_defaults(func=_cmd_run)

    bounds = sub.add_parser("bounds", help="closed-form two-cell sum-rate bounds")
    bounds.add_argument("--snr-db", required=True, help="comma-separated SNR grid in dB")
    bounds.add_argument("--alpha", type=float, required=True)
    bounds.add_argument("--beta", type=float, required=True)
    bounds.add_argument("--out", default="-")
    bounds.set_defaults(func=_cmd_bounds)

    validate = sub.add_parser("validate", help="parse and validate a config file")
    validate.add_argument("--config", required=True)
    validate.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigParseError, ConfigValidationError, InvalidArgumentError) as exc:
        print(f"cbsim: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalFailureError as exc:
        print(f"cbsim: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
