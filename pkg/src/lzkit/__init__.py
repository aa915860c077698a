"""Cross-validating toolkit for the two-level linear avoided crossing.

Four mutually checking routes to the same dynamics: an adaptive numeric
reference (``integrator``), elementary-wave asymptotics for large negative
and positive times (``asymptotics``), the exact parabolic-cylinder-function
solution (``pcf``), and WKB waves (``wkb``).  ``reports`` and ``cli``
export trajectories and comparison reports as plot-ready CSV/JSON.
"""

from .core import (
    TAU_MIN,
    Amplitudes,
    LZConfig,
    Trajectory,
    TrajectoryPoint,
    delta_phi,
    elementary_wave_f,
    lz_values,
    norm_error,
    phase_phi,
    unwrap_phase,
)
from .integrator import (
    SolverOptions,
    StepLimitExceeded,
    SweepRow,
    ToleranceFailure,
    integrate,
    integrate_span,
    rhs,
    sweep,
)
from .asymptotics import (
    MatchingCoefficients,
    NegativeCoefficients,
    amplitude_a_negative_leading,
    amplitudes_negative,
    amplitudes_positive,
    asymptotic_limits,
    coeffs_negative,
    heuristic_positive_a,
    residual_check,
)
from .pcf import (
    AccuracyLoss,
    GammaPoleError,
    PcfOrder,
    PcfValue,
    chi,
    exact_a,
    exact_b,
    exact_trajectory,
    gamma_abs_identity,
    kappa,
    log_gamma,
    matching_coeffs,
    pcf_D,
)
from .wkb import WkbWave, lambda_momentum, second_order_residual, theta_action, wkb_wave
from .reports import (
    CompareReport,
    InsufficientOscillations,
    compare_methods,
    evaluate_method,
    fit_envelope,
    linear_grid,
    logsym_grid,
)

__version__ = "0.1.0"
