"""Command-line driver: trajectory export, method comparison, figure data.

Subcommands
-----------
simulate    numeric reference trajectory -> CSV/JSON
exact       cylinder-function solution on a grid -> CSV/JSON
asymptotic  elementary-wave superpositions (negative + positive) -> CSV/JSON
wkb         WKB waves and their reduction errors on a positive grid -> CSV
compare     pointwise deviation reports against the numeric reference -> JSON
figures     plot-ready data sets 1..4 (moduli/phases, complex plane,
            method comparison on a log grid, phase-singularity diagnostics)
sweep       endpoint amplitudes across a list of chirp values -> CSV/JSON

A JSON config file (--config) may supply any long flag by name (for
example {"epsilon": 3.0, "tau0": 100.0}); explicit flags override it.
Exit codes: 0 success, 2 usage error, 3 numeric failure, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import pcf, wkb
from .core import TAU_MIN, LZConfig, delta_phi
from .integrator import SolverOptions, StepLimitExceeded, ToleranceFailure, sweep as run_sweep
from .reports import (
    TRAJECTORY_COLUMNS,
    compare_methods,
    evaluate_method,
    format_float,
    linear_grid,
    logsym_grid,
    phase_velocity,
    trajectory_to_json,
    write_trajectory_csv,
)

_METHOD_ALIASES = {
    "numeric": "numeric",
    "exact": "exact_pcf",
    "exact_pcf": "exact_pcf",
    "asymptotic_negative": "asymptotic_negative",
    "asymptotic_positive": "asymptotic_positive",
    "heuristic": "heuristic",
}


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _write_table(path: str | None, columns: tuple[str, ...], rows: np.ndarray) -> None:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(format_float(v) for v in row))
    _write_text(path, "\n".join(lines) + "\n")


def _build_grid(args: argparse.Namespace) -> np.ndarray:
    if args.grid == "linear":
        return linear_grid(args.tau0, args.samples)
    return logsym_grid(args.tau0, args.samples, args.tau_min)


def _solver_options(args: argparse.Namespace, grid: np.ndarray | None = None) -> SolverOptions:
    return SolverOptions(
        rtol=args.rtol, atol=args.atol, max_steps=args.max_steps, sample_grid=grid
    )


def _config(args: argparse.Namespace) -> LZConfig:
    return LZConfig(epsilon=args.epsilon, tau0=args.tau0)


def _emit_trajectory(args: argparse.Namespace, traj) -> None:
    if args.format == "json":
        _write_text(args.output, trajectory_to_json(traj))
    else:
        if args.output is None or args.output == "-":
            _write_text(None, _trajectory_csv_text(traj))
        else:
            write_trajectory_csv(traj, args.output)


def _trajectory_csv_text(traj) -> str:
    from .reports import _trajectory_table

    lines = [",".join(TRAJECTORY_COLUMNS)]
    for row in _trajectory_table(traj):
        lines.append(",".join(format_float(v) for v in row))
    return "\n".join(lines) + "\n"


def _cmd_simulate(args: argparse.Namespace) -> int:
    grid = _build_grid(args)
    traj = evaluate_method("numeric", _config(args), grid, _solver_options(args))
    _emit_trajectory(args, traj)
    return 0


def _cmd_exact(args: argparse.Namespace) -> int:
    grid = _build_grid(args)
    traj = evaluate_method("exact_pcf", _config(args), grid)
    _emit_trajectory(args, traj)
    return 0


def _cmd_asymptotic(args: argparse.Namespace) -> int:
    config = _config(args)
    grid = _build_grid(args)
    grid = grid[np.abs(grid) >= TAU_MIN]
    neg = evaluate_method("asymptotic_negative", config, grid, full_positive=args.full)
    pos = evaluate_method("asymptotic_positive", config, grid, full_positive=args.full)
    a = np.where(grid < 0, neg.a, pos.a)
    b = np.where(grid < 0, neg.b, pos.b)
    table = np.column_stack(
        [
            grid,
            a.real,
            a.imag,
            np.abs(a),
            _piecewise_unwrap(grid, a),
            b.real,
            b.imag,
            np.abs(b),
            _piecewise_unwrap(grid, b),
            np.abs(np.abs(a) ** 2 + np.abs(b) ** 2 - 1.0),
        ]
    )
    if args.format == "json":
        payload = {
            "config": {"epsilon": config.epsilon, "tau0": config.tau0},
            "method": "asymptotic",
            "columns": list(TRAJECTORY_COLUMNS),
            "points": [[float(v) for v in row] for row in table],
        }
        _write_text(args.output, json.dumps(payload, sort_keys=True, separators=(",", ":")))
    else:
        _write_table(args.output, TRAJECTORY_COLUMNS, table)
    return 0


def _piecewise_unwrap(grid: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Unwrap the negative- and positive-time branches independently."""
    out = np.empty(grid.size)
    for mask in (grid < 0, grid >= 0):
        if np.any(mask):
            out[mask] = np.unwrap(np.angle(values[mask]))
    return out


def _cmd_wkb(args: argparse.Namespace) -> int:
    eps = args.epsilon
    lo = max(args.tau_min, 1.0)
    taus = np.logspace(math.log10(lo), math.log10(args.tau0), args.samples)
    rows = np.empty((taus.size, 7))
    for i, t in enumerate(taus):
        t = float(t)
        up = wkb.wkb_wave("plus", t, eps)
        um = wkb.wkb_wave("minus", t, eps)
        f = np.exp(1j * (0.5 * eps * t * t + math.log(t) / (2.0 * eps)))
        rows[i] = (
            t,
            up.real,
            up.imag,
            um.real,
            um.imag,
            abs(up / f - 1.0),
            abs(2.0 * eps * t * um / np.conj(f) - 1.0),
        )
    _write_table(
        args.output,
        ("tau", "re_u_plus", "im_u_plus", "re_u_minus", "im_u_minus",
         "reduction_err_plus", "reduction_err_minus"),
        rows,
    )
    return 0


def _cmd_compare(args: argparse.Namespace) -> int:
    methods = []
    for name in args.methods.split(","):
        name = name.strip()
        if name not in _METHOD_ALIASES:
            raise ValueError(f"unknown method {name!r}")
        methods.append(_METHOD_ALIASES[name])
    grid = _build_grid(args)
    reports, _ = compare_methods(_config(args), methods, grid, _solver_options(args))
    payload = {name: rep.to_dict() for name, rep in reports.items()}
    _write_text(args.output, json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return 0


def _cmd_figures(args: argparse.Namespace) -> int:
    config = _config(args)
    grid = logsym_grid(args.tau0, args.samples, args.tau_min)
    if args.which in (1, 2):
        traj = evaluate_method("numeric", config, grid, _solver_options(args))
        _emit_trajectory(args, traj)
        return 0
    if args.which == 3:
        numeric = evaluate_method("numeric", config, grid, _solver_options(args))
        neg = evaluate_method("asymptotic_negative", config, grid)
        pos = evaluate_method("asymptotic_positive", config, grid)
        asym_a = np.where(grid < 0, neg.a, pos.a)
        asym_b = np.where(grid < 0, neg.b, pos.b)
        table = np.column_stack(
            [
                grid,
                np.abs(numeric.a),
                np.abs(numeric.b),
                np.abs(asym_a),
                np.abs(asym_b),
            ]
        )
        _write_table(
            args.output,
            ("tau", "abs_a_numeric", "abs_b_numeric", "abs_a_asymptotic", "abs_b_asymptotic"),
            table,
        )
        return 0
    if args.which == 4:
        neg_grid = grid[grid < 0]
        traj = evaluate_method("numeric", config, neg_grid, _solver_options(args))
        dphi = np.array([delta_phi(abs(float(t)), config) for t in neg_grid])
        dphi_dot = config.epsilon * neg_grid + 1.0 / (2.0 * config.epsilon * neg_grid)
        table = np.column_stack(
            [neg_grid, dphi, dphi_dot, traj.phase_a, phase_velocity(traj)]
        )
        _write_table(
            args.output,
            ("tau", "delta_phi", "delta_phi_dot", "phase_a_numeric", "phase_velocity_numeric"),
            table,
        )
        return 0
    raise ValueError(f"--which must be 1..4, got {args.which}")


def _cmd_sweep(args: argparse.Namespace) -> int:
    eps_list = [float(x) for x in str(args.epsilon).split(",")]
    configs = [LZConfig(epsilon=e, tau0=args.tau0) for e in eps_list]
    rows = run_sweep(configs, _solver_options(args))
    if args.format == "json":
        payload = [
            {
                "epsilon": r.epsilon,
                "tau0": r.tau0,
                "re_a": None if r.a_end is None else r.a_end.real,
                "im_a": None if r.a_end is None else r.a_end.imag,
                "re_b": None if r.b_end is None else r.b_end.real,
                "im_b": None if r.b_end is None else r.b_end.imag,
                "error": r.error,
            }
            for r in rows
        ]
        _write_text(args.output, json.dumps(payload, sort_keys=True, indent=2) + "\n")
        return 0
    lines = [",".join(("epsilon", "tau0", "re_a", "im_a", "abs_a", "re_b", "im_b", "abs_b", "error"))]
    for r in rows:
        if r.error is None:
            lines.append(
                ",".join(
                    [
                        format_float(r.epsilon),
                        format_float(r.tau0),
                        format_float(r.a_end.real),
                        format_float(r.a_end.imag),
                        format_float(abs(r.a_end)),
                        format_float(r.b_end.real),
                        format_float(r.b_end.imag),
                        format_float(abs(r.b_end)),
                        "",
                    ]
                )
            )
        else:
            lines.append(
                ",".join(
                    [format_float(r.epsilon), format_float(r.tau0), "", "", "", "", "", "", r.error.replace(",", ";")]
                )
            )
    _write_text(args.output, "\n".join(lines) + "\n")
    return 0


def _add_common(parser: argparse.ArgumentParser, tau0_default: float = 100.0) -> None:
    parser.add_argument("--config", type=str, default=None, help="JSON file supplying flags")
    parser.add_argument("--epsilon", type=str, default="3.0", help="dimensionless chirp")
    parser.add_argument("--tau0", type=float, default=tau0_default, help="start time magnitude")
    parser.add_argument("--samples", type=int, default=2001, help="sample count")
    parser.add_argument("--grid", choices=("linear", "logsym"), default="linear")
    parser.add_argument(
        "--tau-min", dest="tau_min", type=float, default=1e-3,
        help="inner cutoff of the log-symmetric grid",
    )
    parser.add_argument("--rtol", type=float, default=1e-10)
    parser.add_argument("--atol", type=float, default=1e-12)
    parser.add_argument("--max-steps", dest="max_steps", type=int, default=50_000_000)
    parser.add_argument("--output", "-o", type=str, default=None, help="output path (default stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lzkit", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="numeric reference trajectory")
    _add_common(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("exact", help="cylinder-function solution")
    _add_common(p, tau0_default=5.0)
    p.set_defaults(func=_cmd_exact)

    p = sub.add_parser("asymptotic", help="elementary-wave superpositions")
    _add_common(p)
    p.add_argument("--full", action="store_true", help="keep the finite-tau0 terms")
    p.set_defaults(func=_cmd_asymptotic, grid="logsym")

    p = sub.add_parser("wkb", help="WKB waves and reduction errors")
    _add_common(p, tau0_default=100.0)
    p.set_defaults(func=_cmd_wkb)

    p = sub.add_parser("compare", help="deviation reports against the numeric reference")
    _add_common(p, tau0_default=5.0)
    p.add_argument("--methods", type=str, default="exact,numeric",
                   help="comma list: numeric,exact,asymptotic_negative,asymptotic_positive,heuristic")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("figures", help="plot-ready data sets")
    _add_common(p)
    p.add_argument("--which", type=int, required=True, choices=(1, 2, 3, 4),
                   help="data set number 1..4")
    p.set_defaults(func=_cmd_figures, grid="logsym", samples=2000)

    p = sub.add_parser("sweep", help="endpoint amplitudes over chirp values")
    _add_common(p)
    p.set_defaults(func=_cmd_sweep)

    return parser


def _apply_config_file(args: argparse.Namespace, argv: list[str]) -> argparse.Namespace:
    """Fill flags from the JSON config file; explicit flags win."""
    if not args.config:
        return args
    with open(args.config) as fh:
        overrides = json.load(fh)
    explicit = set()
    for token in argv:
        if token.startswith("--"):
            explicit.add(token.lstrip("-").split("=")[0].replace("-", "_"))
    for key, value in overrides.items():
        dest = key.replace("-", "_")
        if dest in explicit or not hasattr(args, dest):
            continue
        setattr(args, dest, value)
    return args


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _apply_config_file(args, argv)
        if hasattr(args, "epsilon") and args.command != "sweep":
            args.epsilon = float(args.epsilon)
        args.tau0 = float(args.tau0)
        args.samples = int(args.samples)
        args.rtol = float(args.rtol)
        args.atol = float(args.atol)
        args.tau_min = float(args.tau_min)
        args.max_steps = int(args.max_steps)
        return args.func(args)
    except (StepLimitExceeded, ToleranceFailure, pcf.AccuracyLoss, ArithmeticError) as exc:
        _emit_error(exc)
        return 3
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        _emit_error(exc)
        return 2
    except OSError as exc:
        _emit_error(exc)
        return 4


def _emit_error(exc: Exception) -> None:
    record = {"error": type(exc).__name__, "message": str(exc)}
    print(json.dumps(record, sort_keys=True), file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
