import cmath
import math

import numpy as np
import pytest

from conftest import grid_index
from lzkit import (
    LZConfig,
    amplitude_a_negative_leading,
    amplitudes_negative,
    amplitudes_positive,
    asymptotic_limits,
    coeffs_negative,
    delta_phi,
    heuristic_positive_a,
    matching_coeffs,
    phase_phi,
    residual_check,
)

CFG = LZConfig(3.0, 100.0)


class TestNegativeCoefficients:
    def test_moduli(self):
        nc = coeffs_negative(CFG)
        pref = 1.0 / (1.0 + 1.0 / (4.0 * 9.0 * 1e4))
        assert abs(nc.alpha_minus) == pytest.approx(pref, rel=1e-14)
        assert abs(nc.alpha_minus) == pytest.approx(0.99999722, abs=1e-8)
        assert abs(nc.beta_minus) == pytest.approx(abs(nc.alpha_minus) / 600.0, rel=1e-14)
        assert abs(nc.beta_minus) == pytest.approx(1.66666e-3, abs=1e-8)

    def test_collapse_for_large_tau0(self):
        nc = coeffs_negative(LZConfig(3.0, 1e6))
        assert abs(nc.alpha_minus) == pytest.approx(1.0, abs=1e-12)
        assert abs(nc.beta_minus) == pytest.approx(0.0, abs=1e-6)

    def test_initial_conditions_reproduced(self):
        # substituting the constants back into the superposition at -tau0
        # (ratio convention: f(-tau0) evaluated as f(tau0))
        nc = coeffs_negative(CFG)
        eps, tau0 = CFG.epsilon, CFG.tau0
        f0 = cmath.exp(1j * phase_phi(tau0, eps))
        a0 = nc.alpha_minus * f0 - nc.beta_minus * f0.conjugate() / (2 * eps * tau0)
        b0 = nc.beta_minus * f0.conjugate() + nc.alpha_minus * f0 / (2 * eps * tau0)
        assert a0 == pytest.approx(1.0, abs=1e-12)
        assert b0 == pytest.approx(0.0, abs=1e-12)

    def test_rejects_zero_epsilon(self):
        with pytest.raises(ValueError):
            coeffs_negative(LZConfig(0.0, 100.0))


class TestAmplitudesNegative:
    def test_start_point_exact(self):
        amps = amplitudes_negative(100.0, CFG)
        assert amps.a == 1.0 and amps.b == 0.0

    def test_against_reference_run(self, traj_eps3_tau100):
        for tau in (-10.0, -30.0, -80.0):
            i = grid_index(traj_eps3_tau100, tau)
            amps = amplitudes_negative(abs(tau), CFG)
            assert abs(amps.a - traj_eps3_tau100.a[i]) <= 2e-3
            assert abs(amps.b - traj_eps3_tau100.b[i]) <= 2e-3

    def test_b_magnitude_inverse_tau(self):
        # |b| ~ 1/(2 eps |tau|) well inside the interval
        amps = amplitudes_negative(10.0, CFG)
        assert abs(amps.b) == pytest.approx(1.0 / 60.0, rel=0.2)

    def test_domain(self):
        with pytest.raises(ValueError):
            amplitudes_negative(1e-8, CFG)
        with pytest.raises(ValueError):
            amplitudes_negative(101.0, CFG)


class TestLeadingAndHeuristic:
    def test_leading_is_unit_phase(self):
        assert amplitude_a_negative_leading(100.0, CFG) == pytest.approx(1.0, abs=0)
        for tau in (0.5, 5.0, 50.0):
            assert abs(amplitude_a_negative_leading(tau, CFG)) == pytest.approx(
                1.0, abs=1e-14
            )

    def test_leading_value(self):
        got = amplitude_a_negative_leading(50.0, CFG)
        assert got == pytest.approx(cmath.exp(1j * delta_phi(50.0, CFG)), rel=1e-15)

    def test_heuristic_is_scaled_leading(self):
        # the continuation is literally one constant times the leading wave
        lz = math.exp(-math.pi / 6.0)
        for tau in (2.0, 20.0, 100.0):
            assert heuristic_positive_a(tau, CFG) == pytest.approx(
                lz * amplitude_a_negative_leading(tau, CFG), rel=1e-14
            )

    def test_heuristic_at_tau0_gives_limit_value(self):
        assert abs(heuristic_positive_a(100.0, CFG)) == pytest.approx(0.592385, abs=1e-6)

    def test_wrong_branch_violates_normalization(self):
        # ln(-1) = -i*pi would make |a| = e^{+pi/(2 eps)} > 1
        bad = heuristic_positive_a(30.0, CFG, branch=-1)
        assert abs(bad) == pytest.approx(math.exp(math.pi / 6.0), rel=1e-13)
        assert abs(bad) > 1.0

    def test_branch_argument_checked(self):
        with pytest.raises(ValueError):
            heuristic_positive_a(30.0, CFG, branch=2)


class TestAmplitudesPositive:
    def test_against_reference_run(self, traj_eps3_tau100):
        coeffs = matching_coeffs(3.0)
        for tau in (10.0, 50.0, 100.0):
            i = grid_index(traj_eps3_tau100, tau)
            amps = amplitudes_positive(tau, CFG, coeffs)
            assert abs(amps.a - traj_eps3_tau100.a[i]) <= 2e-3
            assert abs(amps.b - traj_eps3_tau100.b[i]) <= 2e-3

    def test_full_variant_improves_a(self, traj_eps3_tau100):
        coeffs = matching_coeffs(3.0)
        i = grid_index(traj_eps3_tau100, 50.0)
        two = amplitudes_positive(50.0, CFG, coeffs)
        four = amplitudes_positive(50.0, CFG, coeffs, full=True)
        ref = traj_eps3_tau100.a[i]
        assert abs(four.a - ref) < abs(two.a - ref)

    def test_oscillation_envelope_size(self):
        # the counter-rotating term has modulus |delta| e^{pi/(2 eps)}/(2 eps tau)
        coeffs = matching_coeffs(3.0)
        env = abs(coeffs.delta) * math.exp(math.pi / 6.0) / (2.0 * 3.0 * 100.0)
        assert env == pytest.approx(1.34e-3, abs=1e-5)
        a_vals = [
            abs(amplitudes_positive(t, CFG, coeffs).a) for t in np.linspace(99.0, 100.0, 400)
        ]
        spread = (max(a_vals) - min(a_vals)) / 2.0
        assert spread == pytest.approx(env, rel=0.05)

    def test_endpoint_error_improves_with_tau0(self, traj_eps3_tau100):
        # at tau = tau0 the leading deviation is the dropped counter-wave of
        # size ~|chi|/(2 eps tau0), so doubling tau0 roughly halves it
        from lzkit import integrate_span

        coeffs = matching_coeffs(3.0)
        i = grid_index(traj_eps3_tau100, 100.0)
        e100 = abs(amplitudes_positive(100.0, CFG, coeffs).a - traj_eps3_tau100.a[i])
        _, a2, _, _ = integrate_span(3.0, -200.0, 200.0, sample_grid=np.array([200.0]))
        e200 = abs(
            amplitudes_positive(200.0, LZConfig(3.0, 200.0), coeffs).a - a2[0]
        )
        assert e200 <= 0.65 * e100

    def test_long_time_limits(self):
        coeffs = matching_coeffs(3.0)
        a_lim, b_lim, _ = asymptotic_limits(CFG, coeffs)
        assert abs(a_lim) == pytest.approx(0.592385, abs=1e-6)
        assert abs(b_lim) == pytest.approx(0.805655, abs=1e-6)
        # far out, the superposition approaches those moduli like 1/tau
        big = LZConfig(3.0, 1e5)
        amps = amplitudes_positive(1e5, big, coeffs)
        assert abs(amps.a) == pytest.approx(abs(a_lim), abs=1e-5)
        assert abs(amps.b) == pytest.approx(abs(b_lim), abs=1e-5)


class TestAsymptoticLimits:
    def test_phase_of_b_formula(self):
        # phi_b = arg(delta) - 2 phi(tau0); arg(delta) = -1.178 at eps = 3
        coeffs = matching_coeffs(3.0)
        _, _, phi_b = asymptotic_limits(CFG, coeffs)
        assert phi_b == pytest.approx(
            cmath.phase(coeffs.delta) - 2.0 * phase_phi(100.0, 3.0), rel=1e-15
        )
        assert cmath.phase(coeffs.delta) == pytest.approx(-1.178, abs=5e-4)

    def test_matches_explicit_formula(self):
        # pi/4 - eps tau0^2 - ln(sqrt(2 eps) tau0)/eps + arg Gamma(i/(2 eps))
        from lzkit import log_gamma

        coeffs = matching_coeffs(3.0)
        _, _, phi_b = asymptotic_limits(CFG, coeffs)
        explicit = (
            0.25 * math.pi
            - 3.0 * 100.0**2
            - math.log(math.sqrt(6.0) * 100.0) / 3.0
            + log_gamma(1j / 6.0).imag
        )
        assert phi_b == pytest.approx(explicit, rel=1e-12)


class TestResidualCheck:
    def test_zero_superposition(self):
        assert residual_check(10.0, CFG, 0.0, 0.0) == 0.0

    def test_inverse_square_scaling(self):
        # residual ~ 1/tau^2, so a tenfold tau costs a factor 100
        r10 = residual_check(10.0, CFG, 1.0, 0.0)
        r100 = residual_check(100.0, CFG, 1.0, 0.0)
        assert r100 <= r10 / 100.0 * 3.0
        assert r100 >= r10 / 100.0 / 3.0

    def test_fitted_inverse_square_constant(self):
        taus = np.linspace(10.0, 100.0, 25)
        vals = np.array([residual_check(float(t), CFG, 1.0, 0.3j) for t in taus])
        scaled = vals * taus**2
        assert scaled.max() / scaled.min() <= 1.0001

    def test_negative_times_admitted(self):
        assert residual_check(-10.0, CFG, 1.0, 0.5) > 0.0
        with pytest.raises(ValueError):
            residual_check(1e-9, CFG, 1.0, 0.0)
