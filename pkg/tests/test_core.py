import math

import numpy as np
import pytest

from lzkit import (
    Amplitudes,
    LZConfig,
    delta_phi,
    elementary_wave_f,
    lz_values,
    norm_error,
    phase_phi,
    unwrap_phase,
)
from lzkit.core import TAU_MIN, Trajectory


class TestPhasePhi:
    def test_log_term_vanishes_at_one(self):
        assert phase_phi(1.0, 3.0) == pytest.approx(1.5, abs=0)
        assert phase_phi(1.0, 0.5) == pytest.approx(0.25, abs=0)

    def test_scalar_value(self):
        # eps*tau^2/2 + ln(tau)/(2*eps) at tau=2, eps=1
        assert phase_phi(2.0, 1.0) == pytest.approx(2.0 + math.log(2.0) / 2.0, rel=1e-15)

    @pytest.mark.parametrize("tau", [0.0, -1.0, -1e-9])
    def test_rejects_nonpositive_tau(self, tau):
        with pytest.raises(ValueError):
            phase_phi(tau, 1.0)

    def test_rejects_nonpositive_epsilon(self):
        with pytest.raises(ValueError):
            phase_phi(1.0, 0.0)


class TestElementaryWave:
    def test_values(self):
        assert elementary_wave_f(1.0, 3.0) == pytest.approx(
            complex(math.cos(1.5), math.sin(1.5)), rel=1e-15
        )
        assert elementary_wave_f(1.0, 0.5) == pytest.approx(
            complex(math.cos(0.25), math.sin(0.25)), rel=1e-15
        )

    def test_reference_numbers(self):
        v = elementary_wave_f(1.0, 3.0)
        assert v.real == pytest.approx(0.070737, abs=1e-6)
        assert v.imag == pytest.approx(0.997495, abs=1e-6)


class TestDeltaPhi:
    CFG = LZConfig(3.0, 100.0)

    def test_zero_at_start(self):
        assert delta_phi(100.0, self.CFG) == 0.0

    def test_scalar_value(self):
        # 0.5*3*(50^2-100^2) + ln(0.5)/6
        expected = 1.5 * (2500.0 - 10000.0) + math.log(0.5) / 6.0
        assert delta_phi(50.0, self.CFG) == pytest.approx(expected, rel=1e-15)
        assert delta_phi(50.0, self.CFG) == pytest.approx(-11250.115525, abs=1e-6)

    def test_negative_inside_interval(self):
        for t in (0.1, 1.0, 10.0, 99.0):
            assert delta_phi(t, self.CFG) < 0.0

    @pytest.mark.parametrize("bad", [0.0, -5.0, 100.0001])
    def test_domain(self, bad):
        with pytest.raises(ValueError):
            delta_phi(bad, self.CFG)


class TestLZValues:
    def test_eps_3(self):
        a, b = lz_values(3.0)
        assert a == pytest.approx(0.592385, abs=1e-6)
        assert b == pytest.approx(0.805655, abs=1e-6)

    def test_eps_1(self):
        a, b = lz_values(1.0)
        assert a == pytest.approx(math.exp(-math.pi / 2), rel=1e-15)
        assert b == pytest.approx(0.978155, abs=1e-6)

    def test_large_eps_limit(self):
        a, b = lz_values(1e12)
        assert a == pytest.approx(1.0, abs=1e-11)
        assert b == pytest.approx(0.0, abs=2e-6)

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            lz_values(0.0)


class TestNormError:
    @pytest.mark.parametrize(
        "a,b",
        [(1.0, 0.0), (0.0, 1j), (0.6, 0.8j)],
    )
    def test_unit_pairs(self, a, b):
        assert norm_error(Amplitudes(a, b)) == pytest.approx(0.0, abs=1e-16)

    def test_off_shell(self):
        assert norm_error(Amplitudes(1.0, 1.0)) == pytest.approx(1.0)


class TestTrajectory:
    def test_unwrapped_phases_continuous(self):
        tau = np.linspace(1.0, 10.0, 400)
        a = np.exp(1j * (tau**2))  # fast phase, wraps many times
        traj = Trajectory(
            config=LZConfig(1.0, 10.0), method="numeric", tau=tau, a=a, b=np.zeros_like(a)
        )
        pa = traj.phase_a
        assert np.all(np.abs(np.diff(pa)) < np.pi)
        # unwrapped phase differs from the principal value by multiples of 2*pi
        principal = np.angle(a)
        k = (pa - principal) / (2.0 * np.pi)
        assert np.allclose(k, np.round(k), atol=1e-9)

    def test_requires_increasing_tau(self):
        tau = np.array([0.0, 1.0, 0.5])
        with pytest.raises(ValueError):
            Trajectory(
                config=LZConfig(1.0, 1.0),
                method="numeric",
                tau=tau,
                a=np.ones(3, dtype=complex),
                b=np.zeros(3, dtype=complex),
            )

    def test_rejects_unknown_method(self):
        with pytest.raises(ValueError):
            Trajectory(
                config=LZConfig(1.0, 1.0),
                method="guesswork",
                tau=np.array([0.0]),
                a=np.ones(1, dtype=complex),
                b=np.zeros(1, dtype=complex),
            )

    def test_points_view(self):
        tau = np.array([-1.0, 0.0, 1.0])
        traj = Trajectory(
            config=LZConfig(1.0, 1.0),
            method="numeric",
            tau=tau,
            a=np.array([1.0, 0.8, 0.6], dtype=complex),
            b=np.array([0.0, 0.6, 0.8], dtype=complex),
        )
        pts = list(traj.points)
        assert len(pts) == 3 == len(traj)
        assert pts[1].amps.a == 0.8
        assert pts[2].norm_error == pytest.approx(0.0, abs=1e-15)


def test_tau_min_guard_value():
    assert TAU_MIN == 1e-6
    with pytest.raises(ValueError):
        LZConfig(1.0, 1e-7).validate_asymptotic()
