"""Problem definition and elementary waves for the two-level linear crossing.

The model is the dimensionless two-level system

    i da/dtau = -eps*tau*a + b
    i db/dtau = +eps*tau*b + a

with probability amplitudes a(tau), b(tau), chirp eps > 0, and initial
conditions a(-tau0) = 1, b(-tau0) = 0 imposed at a large negative time
-tau0.  Probability conservation |a|^2 + |b|^2 = 1 holds exactly along any
solution.

For large |tau| the dynamics is carried by the elementary wave

    f(tau) = exp(i*phi(tau)),    phi(tau) = eps*tau^2/2 + ln(tau)/(2*eps)

and its complex conjugate.  The quadratic part of phi comes from the chirp,
the logarithmic part from the lowest-order back-action of the coupling.
Everything here is a pure function of its inputs; all containers are
immutable after construction.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

#: Smallest |tau| accepted by the asymptotic formulas.  The 1/tau weights
#: and ln(tau) diverge at the crossing, so closer approaches are rejected
#: rather than silently returning garbage.
TAU_MIN = 1e-6

#: Trajectory provenance tags.
METHODS = frozenset(
    {
        "numeric",
        "asymptotic_negative",
        "asymptotic_positive",
        "heuristic",
        "exact_pcf",
        "wkb",
    }
)


@dataclass(frozen=True)
class LZConfig:
    """One problem instance: chirp ``epsilon`` and start time ``tau0``.

    The dynamics runs from tau = -tau0 to tau = +tau0.  ``epsilon`` must be
    positive for every asymptotic or parabolic-cylinder operation; the ODE
    integrator alone also accepts epsilon = 0 (pure Rabi flopping).
    """

    epsilon: float
    tau0: float

    def validate(self, allow_zero_epsilon: bool = False) -> None:
        if self.epsilon < 0 or (self.epsilon == 0 and not allow_zero_epsilon):
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.tau0 < 0:
            raise ValueError(f"tau0 must be nonnegative, got {self.tau0}")

    def validate_asymptotic(self) -> None:
        """Stricter domain used by the asymptotic/PCF modules."""
        self.validate()
        if self.tau0 < TAU_MIN:
            raise ValueError(
                f"tau0 must be >= {TAU_MIN} for asymptotic operations, got {self.tau0}"
            )


@dataclass(frozen=True)
class Amplitudes:
    """Complex amplitude pair (a, b) at a single time."""

    a: complex
    b: complex


@dataclass(frozen=True)
class TrajectoryPoint:
    tau: float
    amps: Amplitudes
    norm_error: float
    phase_a: float
    phase_b: float


@dataclass(frozen=True)
class Trajectory:
    """Ordered (tau, a, b) samples plus solver metadata.

    ``phase_a`` and ``phase_b`` are continuously unwrapped arguments: they
    differ from the principal value by integer multiples of 2*pi, chosen so
    consecutive samples never jump by more than pi.
    """

    config: LZConfig
    method: str
    tau: np.ndarray
    a: np.ndarray
    b: np.ndarray
    solver_meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.tau.size > 1 and not np.all(np.diff(self.tau) > 0):
            raise ValueError("trajectory times must be strictly increasing")

    @property
    def norm_error(self) -> np.ndarray:
        return np.abs(np.abs(self.a) ** 2 + np.abs(self.b) ** 2 - 1.0)

    @property
    def phase_a(self) -> np.ndarray:
        return unwrap_phase(self.a)

    @property
    def phase_b(self) -> np.ndarray:
        return unwrap_phase(self.b)

    @property
    def points(self) -> Iterator[TrajectoryPoint]:
        ne, pa, pb = self.norm_error, self.phase_a, self.phase_b
        for i in range(self.tau.size):
            yield TrajectoryPoint(
                tau=float(self.tau[i]),
                amps=Amplitudes(complex(self.a[i]), complex(self.b[i])),
                norm_error=float(ne[i]),
                phase_a=float(pa[i]),
                phase_b=float(pb[i]),
            )

    def __len__(self) -> int:
        return int(self.tau.size)


def unwrap_phase(values: np.ndarray) -> np.ndarray:
    """Continuously unwrapped arg(values) along the sample order.

    2*pi is added or subtracted whenever consecutive principal arguments
    jump by more than pi.
    """
    return np.unwrap(np.angle(values))


def phase_phi(tau: float, epsilon: float) -> float:
    """Phase phi(tau) = eps*tau^2/2 + ln(tau)/(2*eps) of the elementary wave.

    Defined for tau > 0 only; negative times are reached through phase
    differences and the explicit branch constant, never by feeding a
    negative tau here.
    """
    if tau <= 0:
        raise ValueError(f"phase_phi requires tau > 0, got {tau}")
    if epsilon <= 0:
        raise ValueError(f"phase_phi requires epsilon > 0, got {epsilon}")
    return 0.5 * epsilon * tau * tau + math.log(tau) / (2.0 * epsilon)


def elementary_wave_f(tau: float, epsilon: float) -> complex:
    """Unit-modulus elementary wave f(tau) = exp(i*phi(tau)), tau > 0."""
    return cmath.exp(1j * phase_phi(tau, epsilon))


def delta_phi(tau_abs: float, config: LZConfig) -> float:
    """Phase advance Delta_phi = phi(-|tau|) - phi(-tau0) along negative times.

    Evaluates eps*(tau^2 - tau0^2)/2 + ln(|tau|/tau0)/(2*eps).  Both terms
    vanish at |tau| = tau0 and both are <= 0 on (0, tau0].
    """
    config.validate_asymptotic()
    if not (0 < tau_abs <= config.tau0):
        raise ValueError(
            f"delta_phi requires 0 < tau_abs <= tau0={config.tau0}, got {tau_abs}"
        )
    eps = config.epsilon
    return 0.5 * eps * (tau_abs * tau_abs - config.tau0 * config.tau0) + math.log(
        tau_abs / config.tau0
    ) / (2.0 * eps)


def lz_values(epsilon: float) -> tuple[float, float]:
    """Long-time limits (|a|, |b|) = (exp(-pi/(2*eps)), sqrt(1 - a^2))."""
    if epsilon <= 0:
        raise ValueError(f"lz_values requires epsilon > 0, got {epsilon}")
    a_lim = math.exp(-math.pi / (2.0 * epsilon))
    return a_lim, math.sqrt(1.0 - a_lim * a_lim)


def norm_error(amps: Amplitudes) -> float:
    """| |a|^2 + |b|^2 - 1 | for a single amplitude pair."""
    return abs(abs(amps.a) ** 2 + abs(amps.b) ** 2 - 1.0)
