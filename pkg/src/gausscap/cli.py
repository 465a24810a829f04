"""Command-line front end: rates, figure sweeps, thresholds, GFT compilation and a self-check.

Exit codes: 0 success, 1 runtime or I/O failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import capacity, circuits
from .capacity import OptimizerSettings
from .channels import ChannelParams
from .entropy import coherent_information
from .states import thermal_state

OUTPUT_DIR_ENV = "GAUSSCAP_OUTPUT_DIR"
FLOAT_FORMAT = "{:.12g}"

SWEEP_COLUMNS = {
    "gamma": ["gamma", "f", "F", "x_star", "source", "f_signed", "F_signed"],
    "nbar": ["n_bar", "f", "F", "x_star", "source", "f_signed", "F_signed"],
}
RATE_FIELDS = ["eta", "n_th", "n_bar", "f", "F", "x_star", "source"]
CHECK_FIELDS = ["M", "N", "analytic", "numeric", "abs_diff"]
THRESHOLD_FIELDS = ["n_th", "n_bar", "eta", "gamma_star", "gamma_tol", "nbar_star", "nbar_tol"]
COMPILE_FIELDS = [
    "N", "gate_count", "op_count", "swap_count", "depth",
    "gate_bound", "depth_bound", "max_deviation", "path",
]


class UsageError(Exception):
    pass


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    return FLOAT_FORMAT.format(float(value))


def parse_grid(text: str) -> np.ndarray:
    """``start:stop:steps`` -> ``steps`` evenly spaced points, endpoints included."""
    try:
        start, stop, steps = text.split(":")
        start, stop, steps = float(start), float(stop), int(steps)
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like start:stop:steps, got {text!r}") from None
    if steps < 1 or (steps > 1 and not stop > start) or not (math.isfinite(start) and math.isfinite(stop)):
        raise argparse.ArgumentTypeError(f"grid {text!r} is not strictly increasing")
    return np.linspace(start, stop, steps)


def parse_mn(text: str) -> tuple:
    try:
        m, n = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected M,N, got {text!r}") from None
    if not 1 <= m <= n:
        raise argparse.ArgumentTypeError(f"need 1 <= M <= N, got {text!r}")
    return m, n


def _eta_from(args, default: float | None = None) -> float:
    if args.gamma is not None:
        return 1.0 - args.gamma
    if args.eta is not None:
        return args.eta
    return default


def _settings(args) -> OptimizerSettings:
    try:
        return OptimizerSettings(grid_size=args.x_grid)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _check_channel(eta: float, n_th: float) -> None:
    if not 0.0 <= eta <= 1.0:
        raise UsageError(f"eta must lie in [0, 1], got {eta}")
    if not n_th >= 0.0:
        raise UsageError(f"n_th must be nonnegative, got {n_th}")


def _resolve_out(args, default_name: str) -> Path | None:
    if args.out is not None:
        return Path(args.out)
    env_dir = os.environ.get(OUTPUT_DIR_ENV)
    if env_dir:
        return Path(env_dir) / default_name
    return None


def _emit(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def rate_report(eta: float, n_th: float, n_bar: float, check_mn=None, opts=capacity.DEFAULT_SETTINGS) -> dict:
    point = capacity.F_bound(eta, n_th, n_bar, opts)
    report = {
        "eta": eta,
        "n_th": n_th,
        "n_bar": n_bar,
        "f": max(0.0, float(point.single_mode_rate)),
        "F": float(point.rate),
        "x_star": float(point.x_star),
        "source": point.source.value,
    }
    if check_mn is not None:
        m, n = check_mn
        analytic = capacity.rate_correlated(eta, n_th, m, n, n_bar)
        numeric = capacity.rate_correlated_numeric(eta, n_th, m, n, n_bar)
        report["check"] = {
            "M": m,
            "N": n,
            "analytic": analytic,
            "numeric": numeric,
            "abs_diff": abs(analytic - numeric),
        }
    return report


def sweep_rows(kind: str, grid: np.ndarray, eta: float, n_th: float, n_bar: float, opts) -> list:
    rows = []
    for value in grid:
        value = float(value)
        if kind == "gamma":
            point = capacity.F_bound(1.0 - value, n_th, n_bar, opts)
        else:
            point = capacity.F_bound(eta, n_th, value, opts)
        rows.append({
            kind if kind == "gamma" else "n_bar": value,
            "f": max(0.0, point.single_mode_rate),
            "F": point.rate,
            "x_star": point.x_star,
            "source": point.source.value,
            "f_signed": point.single_mode_rate,
            "F_signed": point.raw_rate,
        })
    return rows


def rows_to_csv(rows: list, columns: list) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in columns])
    return buf.getvalue()


def compile_report(n_modes: int, out: Path | None) -> dict:
    circuit = circuits.compile_gft(n_modes)
    deviation = float(np.max(np.abs(circuits.circuit_to_symplectic(circuit) - circuits.gft_symplectic(n_modes))))
    log_n = math.log2(n_modes)
    if out is not None:
        _emit(circuits.dumps(circuit), out)
    return {
        "N": n_modes,
        "gate_count": circuit.gate_count,
        "op_count": circuit.op_count,
        "swap_count": circuit.swap_count,
        "depth": circuit.depth,
        "gate_bound": 4 * n_modes * log_n,
        "depth_bound": 4 * log_n**2,
        "max_deviation": deviation,
        "path": None if out is None else str(out),
    }


def selfcheck() -> list:
    """Fast consistency checks; returns (name, passed, detail) triples."""
    results = []

    worst = 0.0
    for eta in (0.2, 0.6, 0.95):
        for n_th in (0.1, 1.0):
            for n_bar in (0.1, 1.0):
                numeric = coherent_information(ChannelParams(eta, n_th), thermal_state(n_bar))
                worst = max(worst, abs(numeric - capacity.f_rate(eta, n_th, n_bar)))
    results.append(("closed-form rate vs entropy difference", worst <= 1e-9, f"max diff {worst:.2e}"))

    worst = 0.0
    for m, n in ((1, 2), (1, 3), (2, 3)):
        worst = max(worst, abs(
            capacity.rate_correlated(0.7, 1.0, m, n, 1.0) - capacity.rate_correlated_numeric(0.7, 1.0, m, n, 1.0)
        ))
    results.append(("correlated rate identity", worst <= 1e-9, f"max diff {worst:.2e}"))

    worst = 0.0
    for n in (2, 4, 8, 16):
        c = circuits.compile_gft(n)
        worst = max(worst, float(np.max(np.abs(circuits.circuit_to_symplectic(c) - circuits.gft_symplectic(n)))))
    results.append(("GFT compiler", worst <= 1e-9, f"max deviation {worst:.2e}"))

    gamma_star = capacity.gamma_threshold(1.0, 1.0)
    ok = gamma_star is not None and abs(gamma_star - 0.1775) <= 5e-4
    results.append(("loss threshold at n_th = n_bar = 1", ok, f"gamma* = {gamma_star}"))
    return results


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gausscap", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def channel_flags(p, eta_default=None, nth_default=1.0, nbar_default=1.0, nbar=True):
        group = p.add_mutually_exclusive_group()
        group.add_argument("--eta", type=float, default=None, help=f"transmissivity (default {eta_default})")
        group.add_argument("--gamma", type=float, default=None, help="loss probability 1 - eta")
        p.add_argument("--nth", type=float, default=nth_default, help="environment photon number")
        if nbar:
            p.add_argument("--nbar", type=float, default=nbar_default, help="mean input photon number per mode")
        p.add_argument("--x-grid", type=int, default=512, dest="x_grid", help="optimizer grid size (>= 64)")

    p = sub.add_parser("rate", help="single-mode rate f, bound F and optimal x for one parameter point")
    channel_flags(p, eta_default=0.81)
    p.add_argument("--check-mn", type=parse_mn, default=None, help="M,N for an entropy-based cross-check")
    p.add_argument("--format", choices=["json", "csv"], default="json", help="output format")
    p.add_argument("--out", default=None, help=f"output file (default: stdout, or a file in ${OUTPUT_DIR_ENV} when set)")

    p = sub.add_parser("sweep-gamma", help="rates against loss probability")
    channel_flags(p)
    p.add_argument("--grid", type=parse_grid, default=parse_grid("0:0.5:101"), help="start:stop:steps (default 0:0.5:101)")
    p.add_argument("--format", choices=["csv", "json"], default="csv", help="output format")
    p.add_argument("--out", default=None, help=f"output file (default: stdout, or a file in ${OUTPUT_DIR_ENV} when set)")

    p = sub.add_parser("sweep-nbar", help="rates against the photon budget")
    channel_flags(p, eta_default=0.81, nbar=False)
    p.add_argument("--grid", type=parse_grid, default=parse_grid("0.05:5:100"), help="start:stop:steps (default 0.05:5:100)")
    p.add_argument("--format", choices=["csv", "json"], default="csv", help="output format")
    p.add_argument("--out", default=None, help=f"output file (default: stdout, or a file in ${OUTPUT_DIR_ENV} when set)")

    p = sub.add_parser("thresholds", help="crossover loss probability and photon budget")
    channel_flags(p, eta_default=0.81)
    p.add_argument("--out", default=None, help=f"output file (default: stdout, or a file in ${OUTPUT_DIR_ENV} when set)")

    p = sub.add_parser("compile", help="compile the N-mode Gaussian Fourier transform")
    p.add_argument("--n", type=int, required=True, dest="n_modes", help="number of modes (power of two)")
    p.add_argument("--out", default=None, help="circuit text destination")

    sub.add_parser("selfcheck", help="run fast internal consistency checks")
    return parser


def _run(args) -> int:
    if args.command == "selfcheck":
        results = selfcheck()
        for name, passed, detail in results:
            print(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
        return 0 if all(p for _, p, _ in results) else 1

    if args.command == "compile":
        n = args.n_modes
        if n < 1 or n & (n - 1):
            raise UsageError(f"--n must be a power of two (the compiler only handles N = 2^m), got {n}")
        out = _resolve_out(args, f"gft_{n}.txt")
        print(json.dumps(compile_report(n, out), indent=2))
        return 0

    opts = _settings(args)

    if args.command == "rate":
        eta = _eta_from(args, 0.81)
        _check_channel(eta, args.nth)
        if args.nbar < 0:
            raise UsageError(f"--nbar must be nonnegative, got {args.nbar}")
        report = rate_report(eta, args.nth, args.nbar, args.check_mn, opts)
        if args.format == "json":
            text = json.dumps(report, indent=2) + "\n"
        else:
            text = rows_to_csv([report], RATE_FIELDS)
        _emit(text, _resolve_out(args, f"rate.{args.format}"))
        return 0

    if args.command in ("sweep-gamma", "sweep-nbar"):
        kind = "gamma" if args.command == "sweep-gamma" else "nbar"
        grid = args.grid
        if kind == "gamma":
            if args.eta is not None or args.gamma is not None:
                raise UsageError("sweep-gamma sweeps the loss probability; do not pass --eta/--gamma")
            if grid[0] < 0 or grid[-1] >= 1:
                raise UsageError("loss probability grid must lie in [0, 1)")
            eta, n_bar = None, args.nbar
            if n_bar < 0:
                raise UsageError(f"--nbar must be nonnegative, got {n_bar}")
            _check_channel(1.0, args.nth)
        else:
            if grid[0] <= 0:
                raise UsageError("photon-number grid must be positive")
            eta, n_bar = _eta_from(args, 0.81), None
            _check_channel(eta, args.nth)
        rows = sweep_rows(kind, grid, eta, args.nth, n_bar, opts)
        if args.format == "csv":
            text = rows_to_csv(rows, SWEEP_COLUMNS[kind])
        else:
            text = json.dumps(rows, indent=2) + "\n"
        _emit(text, _resolve_out(args, f"sweep_{kind}.{args.format}"))
        return 0

    if args.command == "thresholds":
        eta = _eta_from(args, 0.81)
        _check_channel(eta, args.nth)
        if not args.nbar > 0:
            raise UsageError(f"--nbar must be positive, got {args.nbar}")
        report = {
            "n_th": args.nth,
            "n_bar": args.nbar,
            "eta": eta,
            "gamma_star": capacity.gamma_threshold(args.nth, args.nbar, opts=opts),
            "gamma_tol": 1e-4,
            "nbar_star": capacity.nbar_threshold(eta, args.nth, opts=opts),
            "nbar_tol": 1e-3,
        }
        _emit(json.dumps(report, indent=2) + "\n", _resolve_out(args, "thresholds.json"))
        return 0

    raise UsageError(f"unknown command {args.command!r}")  # pragma: no cover


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"{parser.prog}: I/O error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
