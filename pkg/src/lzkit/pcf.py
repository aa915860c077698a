"""Exact solution via parabolic cylinder functions of complex order.

The crossing problem is solved exactly by

    a(tau) = Z(w(tau)) / Z(-z0),
    Z(w)   = D_{nu+1}(z0) D_nu(w) + D_{nu+1}(-z0) D_nu(-w),

with order nu = -1 - i/(2*eps), scaled time w(tau) = sqrt(2*eps)*tau*
exp(i*pi/4), and z0 = w(tau0).  The arguments therefore live on the two
rays arg w = +pi/4 (tau > 0) and arg w = -3*pi/4 (tau < 0); the ray angles
are kept explicit so no branch of the complex logarithm is ever recomputed
from floating-point components.

D_nu(z) itself is evaluated in two regimes:

* power series (|z|^2/2 <= cutoff): through the confluent-hypergeometric
  representation.  On the rays the series argument z^2/2 is purely
  imaginary, so the series is convergent but cancellation-prone; the
  condition number grows like exp(|z|^2/2), which caps the usable domain
  near |z|^2/2 ~ 15 in double precision (measured: ~9e-9 relative error
  at the cutoff).
* asymptotic (beyond the cutoff): the large-|z| expansions, one- or
  two-component depending on the sector, each correction series truncated
  at its smallest term.  At the cutoff the truncation floor is ~3e-7 and
  it falls off steeply with |z|.

Every evaluation records its regime and an error estimate.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .asymptotics import MatchingCoefficients
from .core import LZConfig, Trajectory

__all__ = [
    "AccuracyLoss",
    "GammaPoleError",
    "PcfValue",
    "PcfOrder",
    "PCF_SERIES_CUTOFF",
    "log_gamma",
    "kappa",
    "pcf_D",
    "exact_a",
    "exact_b",
    "exact_trajectory",
    "chi",
    "matching_coeffs",
    "gamma_abs_identity",
]

#: Series regime is used while |z|^2/2 <= PCF_SERIES_CUTOFF.  Chosen where
#: the measured series cancellation (eps_mach * exp(|z|^2/2)) and the
#: measured asymptotic truncation floor cross, both ~1e-8..3e-7.
PCF_SERIES_CUTOFF = 15.0

#: Raise AccuracyLoss when the series cancellation estimate exceeds this.
ACCURACY_LOSS_LIMIT = 1e-8

_EPS = 2.220446049250313e-16


class AccuracyLoss(ArithmeticError):
    """Series cancellation exceeded the promised relative accuracy."""


class GammaPoleError(ZeroDivisionError):
    """log_gamma evaluated at a nonpositive integer."""


@dataclass(frozen=True)
class PcfValue:
    """One parabolic-cylinder evaluation with regime tag and error estimate.

    ``err_estimate`` is an absolute bound proxy: cancellation floor in the
    series regime, magnitude of the first dropped correction term in the
    asymptotic regime.
    """

    value: complex
    regime: str  # "power_series" | "asymptotic"
    err_estimate: float


@dataclass(frozen=True)
class PcfOrder:
    """Order nu of the cylinder functions attached to one chirp value."""

    nu: complex

    @classmethod
    def for_chirp(cls, epsilon: float) -> "PcfOrder":
        if epsilon <= 0:
            raise ValueError(f"epsilon must be positive, got {epsilon}")
        return cls(complex(-1.0, -1.0 / (2.0 * epsilon)))


# Lanczos coefficients, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def log_gamma(z: complex) -> complex:
    """Principal-branch log Gamma via Lanczos approximation.

    For Re z < 0.5 the argument is shifted up with log Gamma(z) =
    log Gamma(z+1) - Log z, which reproduces the standard branch whose
    imaginary part is continuous rather than clipped to (-pi, pi].
    """
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real):
        raise GammaPoleError(f"log_gamma pole at z = {z}")
    shift = 0j
    w = z
    while w.real < 0.5:
        shift += cmath.log(w)
        w += 1.0
    x = _LANCZOS_C[0]
    for i, c in enumerate(_LANCZOS_C[1:], start=1):
        x += c / (w - 1.0 + i)
    t = w + (_LANCZOS_G - 0.5)
    result = _LOG_SQRT_2PI + (w - 0.5) * cmath.log(t) - t + cmath.log(x)
    return result - shift


def _recip_gamma(z: complex) -> complex:
    """1/Gamma(z); exactly zero at the poles."""
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real):
        return 0j
    return cmath.exp(-log_gamma(z))


def kappa(nu: complex) -> complex:
    """Coefficient kappa_nu = sqrt(2*pi)/Gamma(-nu) of the subdominant wave."""
    return math.sqrt(2.0 * math.pi) * cmath.exp(-log_gamma(-nu))


def _kummer_series(a: complex, b: complex, x: complex) -> tuple[complex, float]:
    """M(a, b, x) by direct Taylor summation with compensated accumulation.

    Returns (value, condition) where condition = sum|terms| / |sum| gauges
    the cancellation incurred.  For Re x < 0 the reflection
    M(a,b,x) = e^x M(b-a, b, -x) is applied first so the worst cancellation
    axis is the imaginary one.
    """
    if x.real < 0.0:
        val, cond = _kummer_series(b - a, b, -x)
        return cmath.exp(x) * val, cond
    s = 1.0 + 0j
    comp = 0j  # Neumaier compensation
    term = 1.0 + 0j
    sum_abs = 1.0
    n = 0
    small = 0
    while n < 1000:
        term = term * (a + n) * x / ((b + n) * (n + 1))
        t = s + term
        if abs(s) >= abs(term):
            comp += (s - t) + term
        else:
            comp += (term - t) + s
        s = t
        sum_abs += abs(term)
        n += 1
        if abs(term) < 1e-17 * abs(s):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
    val = s + comp
    return val, sum_abs / abs(val) if val != 0 else math.inf


def _pcf_series(nu: complex, z: complex) -> PcfValue:
    # D_nu(z) = 2^(nu/2) e^(-z^2/4) [ sqrt(pi)/Gamma((1-nu)/2) M(-nu/2, 1/2, z^2/2)
    #                               - sqrt(2 pi) z / Gamma(-nu/2) M((1-nu)/2, 3/2, z^2/2) ]
    x = 0.5 * z * z
    m1, cond1 = _kummer_series(-0.5 * nu, 0.5, x)
    m2, cond2 = _kummer_series(0.5 * (1.0 - nu), 1.5, x)
    c1 = math.sqrt(math.pi) * _recip_gamma(0.5 * (1.0 - nu))
    c2 = math.sqrt(2.0 * math.pi) * _recip_gamma(-0.5 * nu) * z
    inner = c1 * m1 - c2 * m2
    value = cmath.exp(0.5 * nu * math.log(2.0)) * cmath.exp(-0.25 * z * z) * inner
    # cancellation estimate: accumulated |terms| of both series plus the
    # final subtraction, all relative to the surviving inner combination
    gross = abs(c1) * (cond1 * abs(m1)) + abs(c2) * (cond2 * abs(m2))
    cancel = _EPS * gross / abs(inner) if inner != 0 else math.inf
    if cancel > ACCURACY_LOSS_LIMIT:
        raise AccuracyLoss(
            f"power-series cancellation ~{cancel:.2e} exceeds {ACCURACY_LOSS_LIMIT:.0e} "
            f"for nu={nu}, z={z}"
        )
    return PcfValue(value, "power_series", abs(value) * max(cancel, 1e-16))


def _correction_sum(pochhammer_start: complex, z2: complex, alternating: bool) -> tuple[complex, float]:
    """Divergent large-|z| correction series truncated at its smallest term.

    Terms are prod_{j<2k} (pochhammer_start + j) / (k! (2 z^2)^k), with the
    sign (-1)^k when ``alternating``.  Returns (sum, |first dropped term|).
    """
    s = 1.0 + 0j
    term = 1.0 + 0j
    smallest = math.inf
    for k in range(1, 60):
        factor = (pochhammer_start + 2 * k - 2) * (pochhammer_start + 2 * k - 1) / (2.0 * k * z2)
        if alternating:
            factor = -factor
        term = term * factor
        mag = abs(term)
        if mag >= smallest:
            return s, smallest  # divergence onset: stop before the smallest term grows back
        s += term
        smallest = mag
        if mag < 1e-17 * abs(s):
            break
    return s, smallest


def _pcf_asymptotic(nu: complex, r: float, phi: float) -> PcfValue:
    ln_z = complex(math.log(r), phi)
    # z^2 from the polar data, with components snapped onto the axes: on the
    # rays 2*phi = +-pi/2, +-3*pi/2 the real part of z^2 must vanish exactly,
    # and the ~1e-16 residue of cos(2*phi) would otherwise turn into an
    # r^2-amplified spurious modulus in exp(+-z^2/4)
    c2 = math.cos(2.0 * phi)
    s2 = math.sin(2.0 * phi)
    if abs(c2) < 4e-16:
        c2 = 0.0
    if abs(s2) < 4e-16:
        s2 = 0.0
    z2 = (r * r) * complex(c2, s2)
    s1, drop1 = _correction_sum(-nu, z2, alternating=True)
    first = cmath.exp(-0.25 * z2 + nu * ln_z)
    value = first * s1
    err = abs(first) * drop1
    if abs(phi) >= 0.5 * math.pi:
        # sector with both exponentials present; the connection constant
        # carries exp(-i pi (nu+1)) below the real axis, its conjugate above
        kap = math.sqrt(2.0 * math.pi) * _recip_gamma(-nu)
        conn = kap * cmath.exp((-1j if phi < 0 else 1j) * math.pi * (nu + 1.0))
        s2, drop2 = _correction_sum(nu + 1.0, z2, alternating=False)
        second = conn * cmath.exp(0.25 * z2 - (nu + 1.0) * ln_z)
        value = value + second * s2
        err += abs(second) * drop2
    return PcfValue(value, "asymptotic", err)


def _pcf_polar(nu: complex, r: float, phi: float, series_cutoff: float) -> PcfValue:
    if 0.5 * r * r <= series_cutoff:
        return _pcf_series(nu, r * cmath.exp(1j * phi))
    return _pcf_asymptotic(nu, r, phi)


def pcf_D(nu: complex, z: complex, series_cutoff: float = PCF_SERIES_CUTOFF) -> PcfValue:
    """Parabolic cylinder function D_nu(z) for complex order and argument.

    ``series_cutoff`` (in units of |z|^2/2) exists for validation studies;
    the default is the measured double-precision optimum.

    Raises AccuracyLoss when the series regime cannot deliver ~1e-8
    relative accuracy for the requested argument.
    """
    z = complex(z)
    r = abs(z)
    phi = math.atan2(z.imag, z.real)
    return _pcf_polar(complex(nu), r, phi, series_cutoff)


# ---------------------------------------------------------------------------
# Exact crossing solution


class _PcfBasis:
    """Per-config factors of the exact solution, computed once per grid."""

    def __init__(self, config: LZConfig, series_cutoff: float = PCF_SERIES_CUTOFF):
        config.validate_asymptotic()
        self.config = config
        self.cutoff = series_cutoff
        eps = config.epsilon
        self.nu = PcfOrder.for_chirp(eps).nu
        self.scale = math.sqrt(2.0 * eps)  # |w| = scale * |tau|
        self.rotation = cmath.exp(0.25j * math.pi)
        r0 = self.scale * config.tau0
        nu = self.nu
        self.d1_pos = _pcf_polar(nu + 1.0, r0, 0.25 * math.pi, series_cutoff)
        self.d1_neg = _pcf_polar(nu + 1.0, r0, -0.75 * math.pi, series_cutoff)
        dn_neg = _pcf_polar(nu, r0, -0.75 * math.pi, series_cutoff)
        dn_pos = _pcf_polar(nu, r0, 0.25 * math.pi, series_cutoff)
        # Z0 = Z(-z0) = D_{nu+1}(z0) D_nu(-z0) + D_{nu+1}(-z0) D_nu(z0)
        self.z0_norm = self.d1_pos.value * dn_neg.value + self.d1_neg.value * dn_pos.value
        self.err = max(
            p.err_estimate for p in (self.d1_pos, self.d1_neg, dn_neg, dn_pos)
        )

    def _rays(self, tau: float) -> tuple[float, float, float]:
        r = self.scale * abs(tau)
        if tau >= 0:
            return r, 0.25 * math.pi, -0.75 * math.pi
        return r, -0.75 * math.pi, 0.25 * math.pi

    def amplitude_a(self, tau: float) -> complex:
        r, phi_w, phi_mw = self._rays(tau)
        dn_w = _pcf_polar(self.nu, r, phi_w, self.cutoff)
        dn_mw = _pcf_polar(self.nu, r, phi_mw, self.cutoff)
        z = self.d1_pos.value * dn_w.value + self.d1_neg.value * dn_mw.value
        return z / self.z0_norm

    def amplitude_pair(self, tau: float) -> tuple[complex, complex]:
        """(a, b) with b recovered from b = i*da/dtau + eps*tau*a.

        The derivative identity D'_nu(u) = (u/2) D_nu(u) - D_{nu+1}(u)
        makes the (u/2) part of i*da/dtau cancel eps*tau*a identically
        (since i * (dw/dtau)^2 / 2 = -eps), leaving

            b = i (dw/dtau) [D_{nu+1}(-z0) D_{nu+1}(-w) - D_{nu+1}(z0) D_{nu+1}(w)] / Z0.

        Besides avoiding a 2*eps*tau0-fold cancellation at the endpoints,
        this keeps every evaluation at orders nu and nu+1, whose series
        regime is well conditioned (the nu-1 series loses ~|z|^2 more
        digits because D_{nu-1} itself is |z|^-2 small).
        """
        nu = self.nu
        r, phi_w, phi_mw = self._rays(tau)
        dn_w = _pcf_polar(nu, r, phi_w, self.cutoff).value
        dn_mw = _pcf_polar(nu, r, phi_mw, self.cutoff).value
        d1_w = _pcf_polar(nu + 1.0, r, phi_w, self.cutoff).value
        d1_mw = _pcf_polar(nu + 1.0, r, phi_mw, self.cutoff).value
        a = (self.d1_pos.value * dn_w + self.d1_neg.value * dn_mw) / self.z0_norm
        b = (
            1j
            * self.scale
            * self.rotation
            * (self.d1_neg.value * d1_mw - self.d1_pos.value * d1_w)
            / self.z0_norm
        )
        return a, b


def exact_a(tau: float, config: LZConfig) -> complex:
    """Exact amplitude a(tau) from the cylinder-function solution."""
    if abs(tau) > config.tau0:
        raise ValueError(f"|tau| must be <= tau0={config.tau0}, got {tau}")
    return _PcfBasis(config).amplitude_a(tau)


def exact_b(tau: float, config: LZConfig) -> complex:
    """Exact amplitude b(tau), recovered from a and its derivative."""
    if abs(tau) > config.tau0:
        raise ValueError(f"|tau| must be <= tau0={config.tau0}, got {tau}")
    return _PcfBasis(config).amplitude_pair(tau)[1]


def exact_trajectory(config: LZConfig, taus: np.ndarray) -> Trajectory:
    """Exact (a, b) sampled on ``taus``; method tag ``exact_pcf``."""
    taus = np.asarray(taus, dtype=float)
    if taus.size and (abs(taus[0]) > config.tau0 or abs(taus[-1]) > config.tau0):
        raise ValueError("samples must lie within [-tau0, tau0]")
    basis = _PcfBasis(config)
    a = np.empty(taus.size, dtype=np.complex128)
    b = np.empty(taus.size, dtype=np.complex128)
    for i, t in enumerate(taus):
        a[i], b[i] = basis.amplitude_pair(float(t))
    meta = {"series_cutoff": basis.cutoff, "basis_err_estimate": basis.err}
    return Trajectory(config=config, method="exact_pcf", tau=taus, a=a, b=b, solver_meta=meta)


# ---------------------------------------------------------------------------
# Matching constants


def chi(epsilon: float) -> complex:
    """Transition constant chi = sqrt(1-e^(-pi/eps)) e^(i pi/4)
    e^(-i ln(2 eps)/(2 eps)) e^(i arg Gamma(i/(2 eps)))."""
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    modulus = math.sqrt(1.0 - math.exp(-math.pi / epsilon))
    arg_gamma = log_gamma(complex(0.0, 1.0 / (2.0 * epsilon))).imag
    phase = 0.25 * math.pi - math.log(2.0 * epsilon) / (2.0 * epsilon) + arg_gamma
    return modulus * cmath.exp(1j * phase)


def matching_coeffs(epsilon: float) -> MatchingCoefficients:
    """Constants (gamma, delta, rho, sigma) tying the two asymptotic regimes.

    gamma = 1, delta = e^(-pi/(2 eps)) chi, rho = -e^(+pi/(2 eps)) conj(chi),
    sigma = -1.
    """
    c = chi(epsilon)
    half = math.pi / (2.0 * epsilon)
    return MatchingCoefficients(
        gamma=1.0 + 0j,
        delta=math.exp(-half) * c,
        rho=-math.exp(half) * c.conjugate(),
        sigma=-1.0 + 0j,
    )


def gamma_abs_identity(epsilon: float) -> float:
    """|Gamma(i/(2 eps))| via its two closed forms, cross-checked to 1e-12.

    Closed forms: sqrt(pi / (y sinh(pi y))) with y = 1/(2 eps), and
    2 sqrt(pi eps) e^(-pi/(4 eps)) / sqrt(1 - e^(-pi/eps)); both must also
    agree with exp(Re log_gamma(i y)).
    """
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    y = 1.0 / (2.0 * epsilon)
    form1 = math.sqrt(math.pi / (y * math.sinh(math.pi * y)))
    form2 = (
        2.0
        * math.sqrt(math.pi * epsilon)
        * math.exp(-math.pi / (4.0 * epsilon))
        / math.sqrt(1.0 - math.exp(-math.pi / epsilon))
    )
    form3 = math.exp(log_gamma(complex(0.0, y)).real)
    if abs(form1 - form2) > 1e-12 * form1 or abs(form1 - form3) > 1e-12 * form1:
        raise ArithmeticError(
            f"|Gamma(i/(2 eps))| closed forms disagree: {form1}, {form2}, {form3}"
        )
    return form3
