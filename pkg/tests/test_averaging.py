import math

import numpy as np
import pytest

from spibench.averaging import (
    GaussHermiteSpec,
    MonteCarloSpec,
    gaussian_average,
    merkulov_radial_quadrature,
    merkulov_sz,
    sz_single_sample,
)
from spibench.params import MagneticSample, OverhauserDistribution


class TestSpecs:
    @pytest.mark.parametrize("nodes", [3, 4, 16, 53])
    def test_gh_nodes_validated(self, nodes):
        with pytest.raises(ValueError):
            GaussHermiteSpec(nodes)

    def test_mc_samples_validated(self):
        with pytest.raises(ValueError):
            MonteCarloSpec(50, seed=1)


class TestGaussianAverage:
    def test_measure_normalized(self):
        dist = OverhauserDistribution(0.3, (0.1, 0.0, 0.0))
        mean, err = gaussian_average(lambda s: 1.0, dist, GaussHermiteSpec(9))
        assert mean == pytest.approx(1.0, abs=1e-13)
        assert err == pytest.approx(0.0, abs=1e-13)

    def test_zero_mean_noise_component(self):
        # The x component of the total field averages to the external value.
        ext = 0.45
        dist = OverhauserDistribution(0.2, (ext, 0.0, 0.0))
        mean, _ = gaussian_average(
            lambda s: s.omega_g * s.n[0], dist, GaussHermiteSpec(15)
        )
        assert mean == pytest.approx(ext, abs=1e-12)

    def test_matches_merkulov_closed_form(self):
        w = 0.2
        dist = OverhauserDistribution(w)
        for t in (0.0, 2.0, 5.0, 9.0):
            mean, _ = gaussian_average(
                lambda s: sz_single_sample(t, s), dist, GaussHermiteSpec(31)
            )
            assert mean == pytest.approx(merkulov_sz(t, w), abs=1e-6)

    def test_monte_carlo_within_three_sigma(self):
        w = 0.2
        t = 4.0
        dist = OverhauserDistribution(w)
        mean, stderr = gaussian_average(
            lambda s: sz_single_sample(t, s), dist, MonteCarloSpec(100_000, seed=5)
        )
        assert abs(mean - merkulov_sz(t, w)) < 3 * stderr

    def test_zero_width_collapses_to_external(self):
        dist = OverhauserDistribution(0.0, (0.2, 0.0, 0.0))
        mean, err = gaussian_average(lambda s: s.omega_g, dist, GaussHermiteSpec(15))
        assert mean == pytest.approx(0.2)
        assert err == 0.0

    def test_non_finite_integrand_reported(self):
        dist = OverhauserDistribution(0.1)
        with pytest.raises(ValueError, match="non-finite"):
            gaussian_average(lambda s: float("nan"), dist, GaussHermiteSpec(5))

    def test_refinement_agreement_smooth_integrand(self):
        # 15 vs 21 nodes agree to 1e-8 for the smooth fidelity-style
        # integrands (noise width <= gamma regime).
        from spibench.averaging import average_nodes
        from spibench.protocols import _lr_batch

        t_step = math.pi / (2 * 0.4)
        dist = OverhauserDistribution(0.1, (0.4, 0.0, 0.0))
        means = {}
        for nodes in (15, 21):
            vecs, wts = average_nodes(dist, GaussHermiteSpec(nodes))
            means[nodes] = float(np.sum(_lr_batch(vecs, 0.2, t_step, 1) * wts))
        assert abs(means[15] - means[21]) < 1e-8


class TestMerkulov:
    def test_initial_value(self):
        assert merkulov_sz(0.0, 0.3) == pytest.approx(1.0)

    def test_plateau(self):
        assert merkulov_sz(500.0, 0.2) == pytest.approx(1.0 / 3.0, abs=1e-12)

    def test_exact_third_at_inverse_width(self):
        # 1 - t^2 w^2 vanishes exactly at t = 1/w.
        assert merkulov_sz(5.0, 0.2) == pytest.approx(1.0 / 3.0, abs=1e-15)

    def test_validation(self):
        with pytest.raises(ValueError):
            merkulov_sz(-1.0, 0.1)

    def test_radial_matches_cartesian(self):
        # Same measure in two coordinate systems.
        w = 0.15
        dist = OverhauserDistribution(w)
        for t in (1.0, 3.0, 7.0):
            radial = merkulov_radial_quadrature(t, w)
            cartesian, _ = gaussian_average(
                lambda s: sz_single_sample(t, s), dist, GaussHermiteSpec(41)
            )
            assert radial == pytest.approx(cartesian, abs=1e-8)

    def test_radial_matches_closed_form(self):
        w = 0.25
        for t in np.linspace(0, 30, 12):
            assert merkulov_radial_quadrature(t, w, n_radial=120) == pytest.approx(
                merkulov_sz(t, w), abs=1e-8
            )
