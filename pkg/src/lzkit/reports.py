"""Comparison reports, envelope fits, and bit-exact trajectory export.

CSV schema (fixed column order):

    tau, re_a, im_a, abs_a, phase_a, re_b, im_b, abs_b, phase_b, norm_err

Floats are printed with 17 significant digits ('%.17g'), '.' decimal
separator, '\\n' line endings, one header line, so identical inputs always
produce byte-identical files and parsing recovers every double exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, replace

import numpy as np

from . import asymptotics, pcf
from .core import TAU_MIN, Amplitudes, LZConfig, Trajectory, lz_values
from .integrator import SolverOptions, integrate, rhs

__all__ = [
    "InsufficientOscillations",
    "CompareReport",
    "linear_grid",
    "logsym_grid",
    "format_float",
    "write_trajectory_csv",
    "read_trajectory_csv",
    "trajectory_to_json",
    "fit_envelope",
    "evaluate_method",
    "compare_methods",
]

TRAJECTORY_COLUMNS = (
    "tau",
    "re_a",
    "im_a",
    "abs_a",
    "phase_a",
    "re_b",
    "im_b",
    "abs_b",
    "phase_b",
    "norm_err",
)


class InsufficientOscillations(ValueError):
    """Fewer than the required number of envelope maxima were found."""


def linear_grid(tau0: float, count: int) -> np.ndarray:
    if count < 2:
        raise ValueError("linear grid needs at least 2 points")
    return np.linspace(-tau0, tau0, count)


def logsym_grid(tau0: float, count: int, tau_min: float = 1e-3) -> np.ndarray:
    """Log-spaced positive samples mirrored to negative times.

    The window (-tau_min, tau_min) is excluded: the asymptotic formulas
    diverge there and log sampling cannot reach 0 anyway.  Odd counts are
    rounded down to the nearest even total.
    """
    if count < 4:
        raise ValueError("log-symmetric grid needs at least 4 points")
    if not (0 < tau_min < tau0):
        raise ValueError("need 0 < tau_min < tau0")
    half = count // 2
    pos = np.logspace(math.log10(tau_min), math.log10(tau0), half)
    # the log/exp round trip can land an ulp outside [tau_min, tau0]
    pos[0] = tau_min
    pos[-1] = tau0
    return np.concatenate([-pos[::-1], pos])


def format_float(x: float) -> str:
    return "%.17g" % x


def _trajectory_table(traj: Trajectory) -> np.ndarray:
    pa = traj.phase_a
    pb = traj.phase_b
    return np.column_stack(
        [
            traj.tau,
            traj.a.real,
            traj.a.imag,
            np.abs(traj.a),
            pa,
            traj.b.real,
            traj.b.imag,
            np.abs(traj.b),
            pb,
            traj.norm_error,
        ]
    )


def write_trajectory_csv(traj: Trajectory, path: str) -> None:
    table = _trajectory_table(traj)
    lines = [",".join(TRAJECTORY_COLUMNS)]
    for row in table:
        lines.append(",".join(format_float(v) for v in row))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def read_trajectory_csv(path: str) -> dict[str, np.ndarray]:
    with open(path, "r", newline="") as fh:
        header = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if tuple(header) != TRAJECTORY_COLUMNS:
        raise ValueError(f"unexpected CSV header {header}")
    return {name: data[:, i] for i, name in enumerate(TRAJECTORY_COLUMNS)}


def trajectory_to_json(traj: Trajectory) -> str:
    """Deterministic JSON rendering (wall-clock metadata is dropped)."""
    meta = {k: v for k, v in traj.solver_meta.items() if k != "runtime_s"}
    meta = {k: (str(v) if isinstance(v, Amplitudes) else v) for k, v in meta.items()}
    payload = {
        "config": {"epsilon": traj.config.epsilon, "tau0": traj.config.tau0},
        "method": traj.method,
        "solver_meta": meta,
        "columns": list(TRAJECTORY_COLUMNS),
        "points": [[float(v) for v in row] for row in _trajectory_table(traj)],
    }
    return json.dumps(payload, sort_keys=True, indent=None, separators=(",", ":"))


@dataclass(frozen=True)
class CompareReport:
    """Pointwise deviations of one method from the numeric reference.

    Fields that a run cannot define are None: ``envelope_exponent`` needs
    at least 5 resolved oscillation maxima (and is only as good as the
    grid), ``max_abs_error_b`` needs the method to define b at all, and
    ``phase_b_check`` needs the grid to end at tau0.
    """

    method: str
    max_abs_error_a: float
    max_abs_error_b: float | None
    max_norm_error: float
    envelope_exponent: float | None
    phase_b_check: float | None

    def to_dict(self) -> dict:
        return asdict(self)


def fit_envelope(traj: Trajectory, reference: float) -> tuple[float, float]:
    """Power-law fit of the local maxima of ||a| - reference| over tau > 0.

    Least squares of log(peak height) against log(tau); returns
    (exponent, amplitude) with amplitude = exp(intercept).  Raises
    InsufficientOscillations when fewer than 5 maxima exist.
    """
    mask = traj.tau > 0
    tau = traj.tau[mask]
    resid = np.abs(np.abs(traj.a[mask]) - reference)
    if tau.size < 3:
        raise InsufficientOscillations("need tau > 0 samples to fit an envelope")
    interior = (resid[1:-1] > resid[:-2]) & (resid[1:-1] > resid[2:])
    peak_tau = tau[1:-1][interior]
    peak_val = resid[1:-1][interior]
    keep = peak_val > 0
    peak_tau, peak_val = peak_tau[keep], peak_val[keep]
    if peak_tau.size < 5:
        raise InsufficientOscillations(
            f"found {peak_tau.size} oscillation maxima, need at least 5"
        )
    design = np.column_stack([np.log(peak_tau), np.ones(peak_tau.size)])
    (slope, intercept), *_ = np.linalg.lstsq(design, np.log(peak_val), rcond=None)
    return float(slope), float(math.exp(intercept))


def evaluate_method(
    method: str,
    config: LZConfig,
    grid: np.ndarray,
    opts: SolverOptions | None = None,
    full_positive: bool = False,
) -> Trajectory:
    """Trajectory of one method on a common grid.

    Asymptotic methods are only evaluated where they are defined (|tau| >=
    TAU_MIN; the heuristic and the positive superposition only for tau > 0,
    the negative superposition only for tau < 0); points outside get NaN so
    grids stay aligned across methods.
    """
    grid = np.asarray(grid, dtype=float)
    if method == "numeric":
        base = opts if opts is not None else SolverOptions()
        return integrate(config, _with_grid(base, grid))
    if method == "exact_pcf":
        return pcf.exact_trajectory(config, grid)
    a = np.full(grid.size, np.nan, dtype=np.complex128)
    b = np.full(grid.size, np.nan, dtype=np.complex128)
    if method == "asymptotic_negative":
        for i, t in enumerate(grid):
            if -config.tau0 <= t < 0 and abs(t) >= TAU_MIN:
                amps = asymptotics.amplitudes_negative(abs(float(t)), config)
                a[i], b[i] = amps.a, amps.b
    elif method == "asymptotic_positive":
        coeffs = pcf.matching_coeffs(config.epsilon)
        for i, t in enumerate(grid):
            if 0 < t <= config.tau0 and abs(t) >= TAU_MIN:
                amps = asymptotics.amplitudes_positive(
                    float(t), config, coeffs, full=full_positive
                )
                a[i], b[i] = amps.a, amps.b
    elif method == "heuristic":
        # the heuristic continuation tracks a only; b stays undefined
        for i, t in enumerate(grid):
            if TAU_MIN <= abs(t) <= config.tau0:
                if t < 0:
                    a[i] = asymptotics.amplitude_a_negative_leading(abs(float(t)), config)
                else:
                    a[i] = asymptotics.heuristic_positive_a(float(t), config)
    else:
        raise ValueError(f"unknown comparison method {method!r}")
    return Trajectory(config=config, method=method, tau=grid, a=a, b=b)


def _with_grid(opts: SolverOptions, grid: np.ndarray) -> SolverOptions:
    return replace(opts, sample_grid=grid)


def compare_methods(
    config: LZConfig,
    methods: list[str],
    grid: np.ndarray,
    opts: SolverOptions | None = None,
) -> tuple[dict[str, CompareReport], dict[str, Trajectory]]:
    """Run the numeric reference plus the requested methods on one grid.

    Every non-numeric method gets a CompareReport against the reference;
    NaN samples (outside a method's domain) are ignored in the maxima.
    ``phase_b_check`` compares the reference's arg b at the last grid point
    against the predicted endpoint phase arg(delta) - 2*phi(tau0), reduced
    mod 2*pi to [0, pi].
    """
    grid = np.asarray(grid, dtype=float)
    reference = evaluate_method("numeric", config, grid, opts)
    coeffs = pcf.matching_coeffs(config.epsilon)
    _, _, phi_b = asymptotics.asymptotic_limits(config, coeffs)
    phase_dev = None
    if grid.size and abs(grid[-1] - config.tau0) <= 1e-9 * max(1.0, config.tau0):
        dev = (math.atan2(reference.b[-1].imag, reference.b[-1].real) - phi_b) % (
            2.0 * math.pi
        )
        phase_dev = min(dev, 2.0 * math.pi - dev)
    a_lz, _ = lz_values(config.epsilon)
    try:
        exponent, _ = fit_envelope(reference, a_lz)
    except InsufficientOscillations:
        exponent = None
    reports: dict[str, CompareReport] = {}
    trajectories: dict[str, Trajectory] = {"numeric": reference}
    for method in methods:
        if method == "numeric":
            continue
        traj = evaluate_method(method, config, grid, opts)
        trajectories[method] = traj
        mask = ~np.isnan(traj.a.real)
        err_a = np.abs(traj.a - reference.a)[mask]
        mask_b = ~np.isnan(traj.b.real)
        err_b = np.abs(traj.b - reference.b)[mask_b]
        reports[method] = CompareReport(
            method=method,
            max_abs_error_a=float(err_a.max()) if err_a.size else float("nan"),
            max_abs_error_b=float(err_b.max()) if err_b.size else None,
            max_norm_error=float(reference.norm_error.max()),
            envelope_exponent=exponent,
            phase_b_check=phase_dev,
        )
    return reports, trajectories


def phase_velocity(traj: Trajectory) -> np.ndarray:
    """Instantaneous d(arg a)/dtau = Im(da/dtau / a) along a trajectory."""
    out = np.empty(traj.tau.size)
    for i, t in enumerate(traj.tau):
        amps = Amplitudes(complex(traj.a[i]), complex(traj.b[i]))
        deriv = rhs(float(t), amps, traj.config.epsilon)
        out[i] = (deriv.a / amps.a).imag if amps.a != 0 else math.nan
    return out
