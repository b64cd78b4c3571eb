import math

import numpy as np
import pytest

from spibench.amplitudes import ExponentialWavepacket
from spibench.oracle import (
    LatticeState,
    convergence_study,
    emission_discrepancy,
    evolve,
    lr_discrepancy,
    scattering_discrepancy,
    simulate_emission,
    simulate_lr,
    simulate_scattering,
)
from spibench.params import MagneticSample
from spibench.protocols import lr_fidelity_1, lr_fidelity_2, lr_overlaps

NOISY = MagneticSample(0.37, 0.22, (0.55, 0.32, math.sqrt(1 - 0.55**2 - 0.32**2)))
T_STEP = math.pi / (2 * 0.4)
LR_SAMPLE = MagneticSample(0.43, 0.21, (0.92, 0.25, math.sqrt(1 - 0.92**2 - 0.25**2)))


class TestLatticeState:
    def test_ground_vacuum_is_dark(self):
        # A ground emitter with no photons only precesses: no emission.
        state = LatticeState.initial(2e-3, 0)
        out = evolve(state, NOISY, 300)
        assert not out.photon_sector(1)
        assert not out.photon_sector(2)
        assert out.norm() == pytest.approx(1.0, abs=1e-12)
        pops = {key: abs(a) ** 2 for key, a in out.amplitudes.items()}
        assert set(em for em, _ in pops) <= {0, 1}

    def test_excited_survival_amplitude(self):
        state = LatticeState.initial(1e-3, 2)  # |up, e>
        out = evolve(state, MagneticSample(0.0, 0.0), 1000)
        amp = out.amplitudes.get((2, ()), 0.0)
        assert abs(abs(amp) - math.exp(-0.5)) < 1e-3

    def test_norm_conserved(self):
        out = evolve(LatticeState.initial(2e-3, 2), NOISY, 400)
        assert abs(out.norm() - 1.0) < 1e-10

    def test_leakage_monitoring(self):
        # With the cap forced to zero photons every emission attempt leaks.
        state = LatticeState(1e-3, {(2, ()): 1.0 + 0.0j}, 0, n_max=0)
        out = evolve(state, MagneticSample(0.0, 0.0), 2000)
        assert out.leakage > 0.5
        assert out.norm() ** 2 + out.leakage == pytest.approx(1.0, abs=1e-10)

    def test_dump_load_roundtrip(self, tmp_path):
        out = evolve(LatticeState.initial(2e-3, 2), NOISY, 50)
        path = tmp_path / "state.txt"
        out.dump(path)
        loaded = LatticeState.load(path)
        assert loaded.delta_t == out.delta_t
        assert loaded.n_bins == out.n_bins
        assert loaded.n_max == out.n_max
        assert set(loaded.amplitudes) == set(out.amplitudes)
        for key, amp in out.amplitudes.items():
            assert loaded.amplitudes[key] == pytest.approx(amp, abs=1e-15)

    def test_generic_matches_fast_engine(self):
        # The optimized emission engine applies the same collision blocks;
        # amplitudes agree to machine precision.
        dt, steps = 2e-3, 400
        state = evolve(LatticeState.initial(dt, 2), NOISY, steps)
        res = simulate_emission(NOISY, steps * dt, dt)
        worst = 0.0
        for (em, bins), amp in state.photon_sector(1).items():
            (b, pol), = bins
            worst = max(worst, abs(amp - res.amps[pol][em][b]))
        assert worst < 1e-12
        assert state.amplitudes.get((2, ()), 0) == pytest.approx(res.vacuum[2], abs=1e-12)
        assert state.amplitudes.get((3, ()), 0) == pytest.approx(res.vacuum[3], abs=1e-12)


class TestEmission:
    def test_matches_closed_form(self):
        assert emission_discrepancy(NOISY, 8.0, 1e-3) < 1e-4

    def test_norm(self):
        res = simulate_emission(NOISY, 8.0, 1e-3)
        assert res.norm_sq() == pytest.approx(1.0, abs=1e-10)
        assert res.leakage == 0.0

    def test_first_order_convergence(self):
        report = convergence_study(
            lambda dt: emission_discrepancy(NOISY, 6.0, dt), [4e-3, 2e-3, 1e-3]
        )
        assert report.order == pytest.approx(1.0, abs=0.1)
        assert report.monotone


class TestScattering:
    def test_uncoupled_photon_passes_unchanged(self):
        # Zero fields, spin down: an R photon never meets its transition.
        s = MagneticSample(0.0, 0.0)
        wp = ExponentialWavepacket(0.5)
        res = simulate_scattering(s, wp, 20.0, 1e-3, zeta="down")
        assert np.allclose(res.amps["L"][0], 0.0) and np.allclose(res.amps["L"][1], 0.0)
        assert np.allclose(res.amps["R"][1], res.input_amps, atol=1e-12)
        assert np.allclose(res.amps["R"][0], 0.0)

    def test_matched_bandwidth_output_orthogonal_to_input(self):
        # Gamma = gamma, zero fields, spin up: the scattered wavepacket has
        # vanishing overlap with the input.
        s = MagneticSample(0.0, 0.0)
        wp = ExponentialWavepacket(1.0)
        res = simulate_scattering(s, wp, 40.0, 1e-3, zeta="up")
        overlap = np.vdot(res.input_amps, res.amps["R"][0])
        assert abs(overlap) < 2e-2

    def test_matches_closed_form(self):
        wp = ExponentialWavepacket(0.6)
        assert scattering_discrepancy(NOISY, wp, 25.0, 1e-3) < 1e-4

    def test_norm(self):
        wp = ExponentialWavepacket(0.6)
        res = simulate_scattering(NOISY, wp, 25.0, 2e-3)
        assert res.norm_sq() == pytest.approx(1.0, abs=1e-10)


class TestLrChain:
    def test_fidelity_matches_overlap_combination(self):
        o = lr_overlaps(LR_SAMPLE, T_STEP)
        res1 = simulate_lr(LR_SAMPLE, 1, 1e-3, T_STEP)
        assert abs(res1.fidelity - lr_fidelity_1(o)) < 1e-3
        res2 = simulate_lr(LR_SAMPLE, 2, 1e-3, T_STEP)
        assert abs(res2.fidelity - lr_fidelity_2(o)) < 1e-3

    def test_norm_accounting(self):
        for n in (1, 2):
            res = simulate_lr(LR_SAMPLE, n, 2e-3, T_STEP)
            assert res.norm_sq == pytest.approx(1.0, abs=1e-10)
            assert res.leakage == 0.0

    def test_ideal_limit_fidelity(self):
        om = 0.02
        s = MagneticSample(om, om, (1.0, 0.0, 0.0))
        res = simulate_lr(s, 1, 2e-3, math.pi / (2 * om))
        assert res.fidelity > 0.999

    def test_pulse_refuses_excited_emitter(self):
        # A unit step far shorter than the lifetime leaves the trion
        # populated; the swap pulse must reject it.
        with pytest.raises(ValueError, match="excited-manifold"):
            simulate_lr(LR_SAMPLE, 2, 1e-4, 0.05)

    def test_steps_validated(self):
        with pytest.raises(ValueError):
            simulate_lr(LR_SAMPLE, 3, 1e-3, T_STEP)

    def test_probe_pairs_match_closed_form(self):
        assert lr_discrepancy(LR_SAMPLE, 2, 2e-3, T_STEP) < 3e-4


class TestConvergenceStudy:
    def test_known_first_order_sequence(self):
        report = convergence_study(lambda dt: 3.0 * dt, [4e-3, 2e-3, 1e-3])
        assert report.order == pytest.approx(1.0, abs=1e-6)
        assert report.monotone and not report.flagged

    def test_constant_sequence_flagged(self):
        report = convergence_study(lambda dt: 0.5, [4e-3, 2e-3, 1e-3])
        assert report.order is None
        assert report.flagged

    def test_non_monotone_flagged(self):
        errs = {4e-3: 1e-3, 2e-3: 2e-3, 1e-3: 2.5e-4}
        report = convergence_study(lambda dt: errs[dt], [4e-3, 2e-3, 1e-3])
        assert not report.monotone
        assert report.flagged
        assert report.order is not None

    def test_validation(self):
        with pytest.raises(ValueError, match="at least 3"):
            convergence_study(lambda dt: dt, [1e-3, 2e-3])
        with pytest.raises(ValueError, match="geometric"):
            convergence_study(lambda dt: dt, [4e-3, 3e-3, 1e-3])
