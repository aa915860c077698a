"""Elementary-wave superpositions valid at large negative and positive times.

Both amplitudes are superpositions of the unit-modulus waves f(tau) =
exp(i*phi(tau)) and its conjugate, with 1/(2*eps*tau) weights:

    a ~ alpha f + beta  f*/(2 eps tau)
    b ~ beta  f* - alpha f /(2 eps tau)

Fixing (alpha, beta) at tau = -tau0 gives the negative-time solution; for
positive times the pair (gamma, delta, rho, sigma) of matching constants
connects the two regimes.

Branch discipline: every formula here is evaluated with positive arguments
|tau| and tau0 only, using the ratio identity f(-|tau|)/f(-tau0) =
f(|tau|)/f(tau0), so the logarithm of a negative number never occurs at
runtime.  Crossing tau = 0 multiplies the forward wave by the single
explicit continuation constant exp(-pi/(2*eps)) -- the choice
ln(-1) = +i*pi, the only branch compatible with |a| <= 1 -- and the
conjugate wave by its inverse.  That constant enters once in
:func:`heuristic_positive_a` and once inside the effective coefficients of
:func:`amplitudes_positive`; nowhere else.

None of these formulas is valid in a neighbourhood of the crossing itself;
arguments with |tau| < TAU_MIN are rejected.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .core import TAU_MIN, Amplitudes, LZConfig, delta_phi, phase_phi

__all__ = [
    "NegativeCoefficients",
    "MatchingCoefficients",
    "coeffs_negative",
    "amplitudes_negative",
    "amplitude_a_negative_leading",
    "heuristic_positive_a",
    "amplitudes_positive",
    "asymptotic_limits",
    "residual_check",
]


@dataclass(frozen=True)
class NegativeCoefficients:
    """Superposition constants fixed by the initial conditions at -tau0.

    |alpha_minus| = [1 + 1/(4 eps^2 tau0^2)]^-1 <= 1 and |beta_minus| =
    |alpha_minus|/(2 eps tau0).
    """

    alpha_minus: complex
    beta_minus: complex


@dataclass(frozen=True)
class MatchingCoefficients:
    """Constants (gamma, delta, rho, sigma) connecting the two time regimes.

    With the exact values gamma = 1, delta = e^(-pi/(2 eps)) chi,
    rho = -e^(pi/(2 eps)) conj(chi), sigma = -1, unitarity reads
    |gamma|^2 e^(-pi/eps) + |delta|^2 e^(pi/eps) = 1.
    """

    gamma: complex
    delta: complex
    rho: complex
    sigma: complex


def _check_tau_abs(tau_abs: float, config: LZConfig) -> None:
    config.validate_asymptotic()
    if not (TAU_MIN <= tau_abs <= config.tau0):
        raise ValueError(
            f"tau_abs must lie in [{TAU_MIN}, tau0={config.tau0}], got {tau_abs}"
        )


def coeffs_negative(config: LZConfig) -> NegativeCoefficients:
    """Constants alpha_-, beta_- fixed by a(-tau0) = 1, b(-tau0) = 0.

    alpha_- = [1 + 1/(4 eps^2 tau0^2)]^-1 / f(-tau0) and
    beta_-  = -[1 + 1/(4 eps^2 tau0^2)]^-1 / (2 eps tau0 f*(-tau0)),
    with f(+-tau0) ratio-evaluated at the positive argument tau0.
    """
    config.validate_asymptotic()
    eps, tau0 = config.epsilon, config.tau0
    pref = 1.0 / (1.0 + 1.0 / (4.0 * eps * eps * tau0 * tau0))
    phase0 = cmath.exp(1j * phase_phi(tau0, eps))
    return NegativeCoefficients(
        alpha_minus=pref / phase0,
        beta_minus=-pref / (2.0 * eps * tau0) * phase0,
    )


def amplitudes_negative(tau_abs: float, config: LZConfig) -> Amplitudes:
    """Negative-time amplitudes at tau = -|tau_abs|.

    a = (1 - 1/(4 eps^2 tau0^2)) e^(i dphi) + e^(-i dphi)/(4 eps^2 tau0 |tau|)
    b = e^(i dphi)/(2 eps |tau|) - e^(-i dphi)/(2 eps tau0)

    with dphi = delta_phi(|tau|).  Terms of order 1/(tau0^2 |tau|) are
    dropped.  Reproduces (1, 0) exactly at |tau| = tau0.
    """
    _check_tau_abs(tau_abs, config)
    eps, tau0 = config.epsilon, config.tau0
    wave = cmath.exp(1j * delta_phi(tau_abs, config))
    conj = wave.conjugate()
    a = (1.0 - 1.0 / (4.0 * eps * eps * tau0 * tau0)) * wave + conj / (
        4.0 * eps * eps * tau0 * tau_abs
    )
    b = wave / (2.0 * eps * tau_abs) - conj / (2.0 * eps * tau0)
    return Amplitudes(a, b)


def amplitude_a_negative_leading(tau_abs: float, config: LZConfig) -> complex:
    """Leading negative-time approximation a(-|tau|) = exp(i*delta_phi)."""
    _check_tau_abs(tau_abs, config)
    return cmath.exp(1j * delta_phi(tau_abs, config))


def heuristic_positive_a(tau_abs: float, config: LZConfig, branch: int = +1) -> complex:
    """Heuristic continuation of the leading wave to positive times.

    Splitting ln(-|tau|/tau0) = ln(-1) + ln(|tau|/tau0) and continuing
    with ln(-1) = +i*pi multiplies the leading wave by exp(-pi/(2*eps)).
    ``branch=-1`` selects the unphysical sheet ln(-1) = -i*pi, whose factor
    exp(+pi/(2*eps)) > 1 violates probability conservation; it is exposed
    for negative tests only.
    """
    if branch not in (+1, -1):
        raise ValueError("branch must be +1 or -1")
    _check_tau_abs(tau_abs, config)
    ln_minus_one = branch * 1j * math.pi
    factor = cmath.exp(1j * ln_minus_one / (2.0 * config.epsilon))
    return factor * amplitude_a_negative_leading(tau_abs, config)


def amplitudes_positive(
    tau_abs: float,
    config: LZConfig,
    coeffs: MatchingCoefficients,
    full: bool = False,
) -> Amplitudes:
    """Positive-time amplitudes at tau = +|tau_abs| from matching constants.

    Default is the tau0 -> infinity two-term superposition

        a = gamma f(|tau|)/f(-tau0) + delta f*(|tau|)/(2 eps |tau| f(-tau0))
        b = delta f*(|tau|)/f(-tau0) - gamma f(|tau|)/(2 eps |tau| f(-tau0))

    evaluated through the effective wave coefficients

        alpha_eff = gamma e^(-pi/(2 eps)) e^(-i phi0)
        beta_eff  = delta e^(+pi/(2 eps)) e^(-i phi0),

    i.e. the continuation constant is applied once, with the decaying sign
    for the forward wave and the inverse for the conjugate wave (this is
    what the unitarity relation of the matching constants encodes).
    ``full=True`` keeps the finite-tau0 terms weighted by rho and sigma for
    error studies.
    """
    _check_tau_abs(tau_abs, config)
    eps, tau0 = config.epsilon, config.tau0
    lz = math.exp(-math.pi / (2.0 * eps))
    phase0 = cmath.exp(1j * phase_phi(tau0, eps))
    alpha_eff = coeffs.gamma * lz / phase0
    beta_eff = coeffs.delta / lz / phase0
    if full:
        # finite-tau0 corrections; the rho/sigma weights were pinned against
        # the exact cylinder-function solution (residual projection on the
        # counter-rotating wave), which fixes the sigma piece at +sigma*lz
        # where naive per-wave continuation would suggest the opposite sign
        g0 = 1.0 / (2.0 * eps * tau0)
        q = 1.0 / (4.0 * eps * eps * tau0 * tau0)
        alpha_eff = coeffs.gamma * lz * (1.0 - q) / phase0 - coeffs.rho * lz * g0 * phase0
        beta_eff = coeffs.delta / lz / phase0 + coeffs.sigma * lz * g0 * phase0
    wave = cmath.exp(1j * phase_phi(tau_abs, eps))
    weight = 1.0 / (2.0 * eps * tau_abs)
    a = alpha_eff * wave + beta_eff * wave.conjugate() * weight
    b = beta_eff * wave.conjugate() - alpha_eff * wave * weight
    return Amplitudes(a, b)


def asymptotic_limits(
    config: LZConfig, coeffs: MatchingCoefficients
) -> tuple[complex, complex, float]:
    """Long-time limit values (a_limit, b_limit, phi_b) at tau = tau0.

    a_limit = gamma exp(-pi/(2 eps)); b converges in modulus to
    sqrt(1 - exp(-pi/eps)) but keeps the tau0-dependent phase
    phi_b = arg(delta) - 2 phi(tau0).
    """
    config.validate_asymptotic()
    eps = config.epsilon
    a_limit = coeffs.gamma * math.exp(-math.pi / (2.0 * eps))
    phi_b = cmath.phase(coeffs.delta) - 2.0 * phase_phi(config.tau0, eps)
    b_limit = math.sqrt(1.0 - math.exp(-math.pi / eps)) * cmath.exp(1j * phi_b)
    return a_limit, b_limit, phi_b


def residual_check(tau: float, config: LZConfig, alpha: complex, beta: complex) -> float:
    """Defect of the two-wave superposition inserted into the exact system.

    The superposition a = alpha f + beta f*/(2 eps tau), b = beta f* -
    alpha f/(2 eps tau) is differentiated with the exact wave identities
    i df/dtau = -(eps tau + 1/(2 eps tau)) f (and conjugate), and the
    returned magnitude is sqrt(|R_a|^2 + |R_b|^2) of the leftover

        R_a = i da/dtau + eps tau a - b,   R_b = i db/dtau - eps tau b - a.

    The leftover consists exactly of the 1/tau^2 terms the superposition
    neglects, so residual * tau^2 stays bounded as |tau| grows.  Negative
    tau is admitted by carrying ln|tau| in the wave phase, which absorbs
    the branch constant into alpha and beta.
    """
    config.validate(allow_zero_epsilon=False)
    if abs(tau) < TAU_MIN:
        raise ValueError(f"|tau| must be >= {TAU_MIN}, got {tau}")
    eps = config.epsilon
    f = cmath.exp(1j * (0.5 * eps * tau * tau + math.log(abs(tau)) / (2.0 * eps)))
    fc = f.conjugate()
    omega = eps * tau + 1.0 / (2.0 * eps * tau)
    fdot = 1j * omega * f
    fcdot = -1j * omega * fc
    w = 1.0 / (2.0 * eps * tau)
    a = alpha * f + beta * fc * w
    b = beta * fc - alpha * f * w
    adot = alpha * fdot + beta / (2.0 * eps) * (fcdot / tau - fc / (tau * tau))
    bdot = beta * fcdot - alpha / (2.0 * eps) * (fdot / tau - f / (tau * tau))
    res_a = 1j * adot + eps * tau * a - b
    res_b = 1j * bdot - eps * tau * b - a
    return math.hypot(abs(res_a), abs(res_b))
