import math
import warnings

import numpy as np
import pytest
from scipy import integrate

from spibench._integrals import QuadratureError, complex_quad, exp_int, exp_int2
from spibench.amplitudes import (
    ExponentialWavepacket,
    SampledWavepacket,
    TruncatedExponentialWavepacket,
    cz_lambda_batch,
    f0_coefficient,
    f_coefficient,
    lambda_coefficient,
    lambda_overlap,
    lr_overlap_batch,
    o_overlap,
)
from spibench.params import MagneticSample

RNG = np.random.default_rng(2718)


def random_sample(omega_scale=1.5):
    return MagneticSample.from_angles(
        RNG.uniform(0.05, omega_scale), RNG.uniform(0.0, omega_scale),
        RNG.uniform(0, np.pi), RNG.uniform(0, 2 * np.pi),
    )


class TestExpIntegrals:
    def test_exp_int_against_quadrature(self):
        for _ in range(20):
            q = complex(RNG.uniform(-3, -0.2), RNG.uniform(-5, 5))
            T = RNG.uniform(0.5, 30)
            ref = integrate.quad(lambda t: np.exp(q * t).real, 0, T)[0] \
                + 1j * integrate.quad(lambda t: np.exp(q * t).imag, 0, T)[0]
            assert exp_int(q, T) == pytest.approx(ref, abs=1e-10)

    def test_exp_int_zero_rate(self):
        assert exp_int(0.0, 3.5) == pytest.approx(3.5)

    def test_exp_int2_including_degenerate_z(self):
        for _ in range(40):
            p = complex(RNG.uniform(-3, -0.3), RNG.uniform(-4, 4))
            z = complex(RNG.uniform(-1, 1), RNG.uniform(-2, 2)) * 10 ** RNG.uniform(-9, 0)
            T = RNG.uniform(0.5, 40)

            def f(s):
                zs = z * s
                tail = (np.exp(zs) - 1) / z if abs(zs) > 1e-8 else s * (1 + zs / 2)
                return np.exp(p * s) * tail

            ref = integrate.quad(lambda s: f(s).real, 0, T, limit=300)[0] \
                + 1j * integrate.quad(lambda s: f(s).imag, 0, T, limit=300)[0]
            assert exp_int2(p, z, T) == pytest.approx(ref, abs=3e-8)

    def test_complex_quad_failure_reports_tolerance(self):
        # A nasty discontinuous oscillator at an impossible tolerance.
        with pytest.raises(QuadratureError):
            complex_quad(lambda t: complex(np.sign(np.sin(500 * t**2))), 0, 30,
                         abs_tol=1e-16, limit=3)


class TestWavepackets:
    def test_exponential_normalized(self):
        wp = ExponentialWavepacket(0.4)
        val, _ = integrate.quad(lambda t: abs(wp(t)) ** 2, 0, 200)
        assert val == pytest.approx(1.0, abs=1e-10)

    def test_truncated_normalized_on_support(self):
        wp = TruncatedExponentialWavepacket(1.0, 3.0)
        val, _ = integrate.quad(lambda t: abs(wp(t)) ** 2, 0, 3.0)
        assert val == pytest.approx(1.0, abs=1e-12)
        assert wp(3.5) == 0.0

    def test_sampled_norm_checked(self):
        t = np.linspace(0, 10, 2001)
        good = np.sqrt(np.exp(-t) / (1 - np.exp(-10.0)))
        # trapezoid-normalize exactly
        good = good / np.sqrt(np.trapezoid(good**2, t))
        SampledWavepacket(t, good)
        with pytest.raises(ValueError, match="norm"):
            SampledWavepacket(t, 1.1 * good)

    def test_bad_parameters(self):
        with pytest.raises(ValueError):
            ExponentialWavepacket(0.0)
        with pytest.raises(ValueError):
            TruncatedExponentialWavepacket(1.0, -1.0)


class TestEmissionCoefficients:
    def test_zero_field_reduces_to_decay(self):
        s = MagneticSample(0.0, 0.0)
        t_prime = 0.7
        val = f_coefficient("R", "up", "up", 5.0, t_prime, s)
        assert val == pytest.approx(math.exp(-t_prime / 2))

    def test_z_axis_selection(self):
        s = MagneticSample(0.8, 0.3, (0.0, 0.0, 1.0))
        for t_prime in (0.0, 0.4, 2.0):
            assert f_coefficient("R", "up", "down", 4.0, t_prime, s) == 0.0

    def test_literal_closed_forms(self):
        # The operator-composition evaluation must reproduce the four
        # tabulated closed forms (and their partners follow below from
        # the conjugation identities).
        for _ in range(40):
            s = random_sample()
            nx, ny, nz = s.n
            a, b = s.omega_e / 2, s.omega_g / 2
            t = RNG.uniform(0.2, 15)
            tp = RNG.uniform(0, t)
            dec = math.exp(-tp / 2)
            d = t - tp
            expected = {
                ("R", 0, 0): dec * np.cos(a * tp) * (np.cos(b * d) - 1j * nz * np.sin(b * d)),
                ("R", 0, 1): -1j * (nx + 1j * ny) * dec * np.cos(a * tp) * np.sin(b * d),
                ("L", 0, 0): 1j * (ny + 1j * nx) * dec * np.sin(a * tp) * np.sin(b * d),
                ("L", 0, 1): -1j * dec * np.sin(a * tp) * (np.cos(b * d) + 1j * nz * np.sin(b * d)),
            }
            for (pol, zeta, mu), ref in expected.items():
                assert f_coefficient(pol, zeta, mu, t, tp, s) == pytest.approx(ref, abs=1e-13)

    def test_conjugation_symmetries_pointwise(self):
        # All four conjugation/sign identities to 1e-12 on a random grid.
        for _ in range(60):
            s = random_sample()
            t = RNG.uniform(0.2, 20)
            tp = RNG.uniform(0, t)

            def f(pol, zeta, mu):
                return f_coefficient(pol, zeta, mu, t, tp, s)

            assert f("R", 0, 0) == pytest.approx(np.conj(f("L", 1, 1)), abs=1e-12)
            assert f("R", 0, 1) == pytest.approx(-np.conj(f("L", 1, 0)), abs=1e-12)
            assert f("L", 0, 0) == pytest.approx(np.conj(f("R", 1, 1)), abs=1e-12)
            assert f("L", 0, 1) == pytest.approx(-np.conj(f("R", 1, 0)), abs=1e-12)

    def test_domain_error(self):
        s = random_sample()
        with pytest.raises(ValueError):
            f_coefficient("R", 0, 0, 1.0, 1.5, s)

    def test_f0_initial_conditions(self):
        s = random_sample()
        assert f0_coefficient("up", "up", 0.0, s) == pytest.approx(1.0)
        assert f0_coefficient("up", "down", 0.0, s) == pytest.approx(0.0)

    @pytest.mark.parametrize("t", [0.5, 2.0, 6.0])
    def test_emission_norm_conservation(self, t):
        # |f0|^2 summed over final spins plus the emitted-photon norm
        # integral equals 1 for every sample and time.
        s = random_sample()
        still = sum(abs(f0_coefficient(0, mu, t, s)) ** 2 for mu in (0, 1))

        def radiated(tp):
            return sum(
                abs(f_coefficient(pol, 0, mu, t, tp, s)) ** 2
                for pol in "RL" for mu in (0, 1)
            )

        emitted, _ = integrate.quad(radiated, 0, t, limit=200)
        assert still + emitted == pytest.approx(1.0, abs=1e-8)


class TestScatteringCoefficients:
    def test_cross_polarization_needs_trion_precession(self):
        s = MagneticSample.from_angles(0.4, 0.0, 1.0, 0.5)
        wp = ExponentialWavepacket(0.5)
        for tp in (0.3, 2.0, 7.0):
            assert lambda_coefficient("L", 0, 0, 10.0, tp, s, wp) == pytest.approx(0.0, abs=1e-14)

    def test_closed_matches_quadrature(self):
        wp = ExponentialWavepacket(0.7)
        for _ in range(12):
            s = random_sample(1.0)
            t = RNG.uniform(4, 20)
            tp = RNG.uniform(0, t)
            pol = RNG.choice(["R", "L"])
            zeta, mu = RNG.integers(0, 2, size=2)
            closed = lambda_coefficient(pol, int(zeta), int(mu), t, tp, s, wp, method="closed")
            quad = lambda_coefficient(pol, int(zeta), int(mu), t, tp, s, wp,
                                      method="quad", abs_tol=1e-12)
            assert closed == pytest.approx(quad, abs=1e-9)

    def test_sampled_wavepacket_path(self):
        # A sampled copy of the exponential must reproduce the closed form.
        big_gamma = 0.8
        wp = ExponentialWavepacket(big_gamma)
        t_grid = np.linspace(0, 60, 30001)
        vals = np.sqrt(big_gamma) * np.exp(-big_gamma * t_grid / 2)
        vals /= np.sqrt(np.trapezoid(vals**2, t_grid))
        sampled = SampledWavepacket(t_grid, vals)
        s = random_sample(0.6)
        # Interpolation kinks cap the certifiable quadrature accuracy.
        got = lambda_coefficient("R", 0, 0, 12.0, 3.0, s, sampled, method="quad", abs_tol=1e-7)
        ref = lambda_coefficient("R", 0, 0, 12.0, 3.0, s, wp, method="closed")
        assert got == pytest.approx(ref, abs=1e-5)

    def test_scattering_unitarity(self):
        # One normalized input photon comes out with unit norm summed over
        # polarizations and final spins.
        s = random_sample(0.8)
        wp = ExponentialWavepacket(0.9)
        t_inf = 40.0

        def total_density(tp):
            return sum(
                abs(lambda_coefficient(pol, 0, mu, t_inf, tp, s, wp)) ** 2
                for pol in "RL" for mu in (0, 1)
            )

        norm, _ = integrate.quad(total_density, 0, t_inf, limit=400)
        assert norm == pytest.approx(1.0, abs=1e-6)


class TestOverlaps:
    def test_o_zero_field_limit(self):
        s = MagneticSample(0.0, 0.0)
        for T1 in (2.0, 8.0, 20.0):
            got = o_overlap("R", 0, 0, T1, s)
            assert got == pytest.approx(1.0 - math.exp(-T1), abs=1e-10)

    def test_o_wrong_polarization_vanishes(self):
        s = MagneticSample.from_angles(0.5, 0.0, 0.8, 0.2)
        for mu in (0, 1):
            assert abs(o_overlap("L", 0, mu, 6.0, s)) < 1e-12

    def test_o_quadrature_matches_closed_batch(self):
        for _ in range(6):
            s = random_sample(0.6)
            T1 = math.pi / (2 * max(s.omega_g, 0.05))
            batch = lr_overlap_batch([s.omega_g], [s.n], s.omega_e, T1)[0]
            for pol, r in (("R", 0), ("L", 1)):
                for zeta in (0, 1):
                    for mu in (0, 1):
                        assert o_overlap(pol, zeta, mu, T1, s) == pytest.approx(
                            batch[r, zeta, mu], abs=1e-9
                        )

    def test_lambda_overlap_ideal_point(self):
        # Closed-form limit of the input/output overlap at matched tiny
        # precession; exact zero at matched bandwidth.
        om = 1e-6
        s = MagneticSample.from_angles(om, om, math.pi / 2, 0.0)
        T = math.pi / (2 * om)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            for big_gamma in (0.01, 0.1, 0.5, 1.0, 2.0):
                lam = lambda_overlap(0, 0, T, s, ExponentialWavepacket(big_gamma))
                ideal = (-1 + big_gamma**2) / (math.sqrt(2) * (1 + big_gamma) ** 2)
                assert lam == pytest.approx(ideal, abs=1e-4)
            small = lambda_overlap(0, 0, T, s, ExponentialWavepacket(0.01))
            assert abs(small - (-1 / math.sqrt(2))) < 0.03

    def test_lambda_overlap_nested_quadrature_reference(self):
        s = MagneticSample.from_angles(0.15, 0.12, math.pi / 2 - 0.2, 0.4)
        T = 24.0
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            for big_gamma in (0.4, 1.0):
                wp = ExponentialWavepacket(big_gamma)
                for zeta in (0, 1):
                    closed = lambda_overlap(zeta, 0, T, s, wp, method="closed")
                    quad = lambda_overlap(zeta, 0, T, s, wp, method="quad", abs_tol=1e-10)
                    assert closed == pytest.approx(quad, abs=1e-8)

    def test_long_time_warning(self):
        s = MagneticSample.from_angles(0.3, 0.3, math.pi / 2, 0.0)
        with pytest.warns(UserWarning, match="T_g"):
            lambda_overlap(0, 0, 5.0, s, ExponentialWavepacket(0.5))

    def test_cz_lambda_batch_shapes(self):
        lam = cz_lambda_batch([0.1, 0.2], [(1, 0, 0), (0, 0, 1)], 0.1, 0.5, 15.0)
        assert lam.shape == (2, 2, 2)
