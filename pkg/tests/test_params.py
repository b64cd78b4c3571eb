import math

import numpy as np
import pytest

from spibench.params import (
    BlochQubit,
    MagneticSample,
    OverhauserDistribution,
    PhysicalConfig,
    sample_magnetic,
    sample_overhauser_draws,
)


class TestPhysicalConfig:
    def test_k_ratio_derives_omega_g_bar(self):
        cfg = PhysicalConfig(omega_e=0.2, k_ratio=2.0)
        assert cfg.omega_g_bar == pytest.approx(0.4)

    def test_inconsistent_k_rejected(self):
        with pytest.raises(ValueError, match="inconsistent"):
            PhysicalConfig(omega_e=0.2, omega_g_bar=0.5, k_ratio=2.0)

    def test_consistent_k_accepted(self):
        PhysicalConfig(omega_e=0.2, omega_g_bar=0.4, k_ratio=2.0)

    @pytest.mark.parametrize("kw", [
        dict(omega_e=-1.0, omega_g_bar=0.1),
        dict(omega_e=0.1, omega_g_bar=0.1, w=-0.5),
        dict(omega_e=0.1, omega_g_bar=0.1, gamma=0.0),
        dict(omega_e=0.1, k_ratio=-2.0),
        dict(omega_e=0.1),  # no way to fix omega_g_bar
    ])
    def test_validation(self, kw):
        with pytest.raises(ValueError):
            PhysicalConfig(**kw)


class TestMagneticSample:
    def test_unit_norm_enforced(self):
        with pytest.raises(ValueError, match="unit"):
            MagneticSample(0.1, 0.1, (0.5, 0.5, 0.5))

    def test_from_angles(self):
        s = MagneticSample.from_angles(0.3, 0.1, math.pi / 2, math.pi / 2)
        assert s.n[1] == pytest.approx(1.0)
        assert s.n_plus == pytest.approx(1j)
        assert s.theta == pytest.approx(math.pi / 2)
        assert s.phi == pytest.approx(math.pi / 2)

    def test_negative_rates_rejected(self):
        with pytest.raises(ValueError):
            MagneticSample(-0.1, 0.0)


class TestBlochQubit:
    def test_norm_enforced(self):
        with pytest.raises(ValueError):
            BlochQubit(1.0, 0.5)

    def test_from_angles(self):
        q = BlochQubit.from_angles(math.pi / 2, 0.3)
        assert abs(q.alpha) ** 2 + abs(q.beta) ** 2 == pytest.approx(1.0)


class TestSampler:
    def test_no_noise_reduces_to_external(self):
        d = OverhauserDistribution(0.0, (0.37, 0.0, 0.0))
        s = sample_magnetic(d, draw=(0.0, 0.0, 0.0))
        assert s.omega_g == pytest.approx(0.37)
        assert s.n == (1.0, 0.0, 0.0)
        assert not s.degenerate

    def test_pure_overhauser_along_z(self):
        d = OverhauserDistribution(0.1)
        s = sample_magnetic(d, draw=(0.0, 0.0, 0.25), omega_e=0.05)
        assert s.omega_g == pytest.approx(0.25)
        assert s.n == (0.0, 0.0, 1.0)
        assert s.omega_e == 0.05

    def test_zero_field_flagged_degenerate(self):
        d = OverhauserDistribution(0.0)
        s = sample_magnetic(d, draw=(0.0, 0.0, 0.0))
        assert s.degenerate
        assert s.omega_g == 0.0
        assert s.n == (1.0, 0.0, 0.0)

    def test_golden_fixture_seed_42(self):
        # Frozen once from the sampler itself; guards the counter-based
        # generator and the reduction to (omega_g, n).
        d = OverhauserDistribution(0.1, (0.2, 0.0, 0.0))
        s = sample_magnetic(d, rng_seed=42, omega_e=0.15)
        assert s.omega_g == pytest.approx(0.2485131034730429, abs=1e-15)
        assert np.allclose(
            s.n,
            (0.9406230150557614, -0.31473329474893635, -0.12716641350564262),
            atol=1e-15,
        )
        s3 = sample_magnetic(d, rng_seed=42, index=3, omega_e=0.15)
        assert s3.omega_g == pytest.approx(0.2741346793014532, abs=1e-15)

    def test_deterministic_given_seed(self):
        d = OverhauserDistribution(0.3, (0.1, 0.2, 0.0))
        a = sample_magnetic(d, rng_seed=7, index=11)
        b = sample_magnetic(d, rng_seed=7, index=11)
        assert a == b

    def test_seed_xor_draw(self):
        d = OverhauserDistribution(0.1)
        with pytest.raises(ValueError):
            sample_magnetic(d)
        with pytest.raises(ValueError):
            sample_magnetic(d, rng_seed=1, draw=(0, 0, 0))

    def test_moments_converge(self):
        # Zero-mean noise: empirical mean within 5 standard errors and
        # per-component variance within 1% at 1e6 samples.
        w = 0.25
        d = OverhauserDistribution(w)
        draws = sample_overhauser_draws(d, 2024, 1_000_000)
        stderr = w / math.sqrt(draws.shape[0])
        assert np.all(np.abs(draws.mean(axis=0)) < 5 * stderr)
        assert np.allclose(draws.var(axis=0), w * w, rtol=0.01)
