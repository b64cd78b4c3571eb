"""Oracle vs closed forms: emission, scattering, LR; convergence ladders."""
import math
import time
import warnings
import numpy as np

from spibench.params import MagneticSample
from spibench.amplitudes import ExponentialWavepacket, f_coefficient, lambda_coefficient
from spibench.oracle import (
    LatticeState, convergence_study, evolve, simulate_emission, simulate_lr,
    simulate_scattering,
)
from spibench.protocols import lr_fidelity_1, lr_fidelity_2, lr_overlaps

warnings.simplefilter("ignore")
noisy = MagneticSample(0.37, 0.22, (0.55, 0.32, np.sqrt(1 - 0.55**2 - 0.32**2)))

# --- emission vs f
def emission_err(dt, sample=noisy, t_final=8.0):
    res = simulate_emission(sample, t_final, dt)
    worst = 0.0
    for pol in ("R", "L"):
        for zeta_idx, zeta in ((0, "up"),):
            for mu in (0, 1):
                analytic = f_coefficient(pol, 0, mu, res.t_final, res.bin_times, sample)
                got = res.amps[pol][mu] / math.sqrt(dt)
                worst = max(worst, float(np.max(np.abs(got - analytic))))
    return worst

t0 = time.time()
rep = convergence_study(emission_err, [4e-3, 2e-3, 1e-3, 5e-4])
print("emission ladder:\n", rep, f"\n  ({time.time()-t0:.1f}s)")

# norm check & decay check
s0 = MagneticSample(0.0, 0.0)
res = simulate_emission(s0, 1.0, 1e-3)
print("survival amp:", abs(res.vacuum[2]), "vs e^-0.5 =", math.exp(-0.5),
      "diff:", abs(abs(res.vacuum[2]) - math.exp(-0.5)))
print("norm_sq:", res.norm_sq())

# --- scattering vs lambda
wpΓ = 0.6
wp = ExponentialWavepacket(wpΓ)

def scattering_err(dt, sample=noisy, t_final=25.0):
    res = simulate_scattering(sample, wp, t_final, dt)
    worst = 0.0
    idx = np.linspace(0, len(res.bin_times) - 1, 40, dtype=int)
    for pol in ("R", "L"):
        for mu in (0, 1):
            analytic = np.array([
                lambda_coefficient(pol, 0, mu, res.t_final, float(res.bin_times[i]), sample, wp)
                for i in idx
            ])
            got = res.amps[pol][mu][idx] / math.sqrt(dt)
            worst = max(worst, float(np.max(np.abs(got - analytic))))
    return worst

t0 = time.time()
rep = convergence_study(scattering_err, [4e-3, 2e-3, 1e-3])
print("\nscattering ladder:\n", rep, f"\n  ({time.time()-t0:.1f}s)")
res = simulate_scattering(noisy, wp, 25.0, 1e-3)
print("scattering norm_sq:", res.norm_sq())

# --- LR1 / LR2 fidelity vs analytic
lr_sample = MagneticSample(0.43, 0.21, (0.92, 0.25, np.sqrt(1 - 0.92**2 - 0.25**2)))
T1 = math.pi / (2 * 0.4)  # nominal

for n in (1, 2):
    t0 = time.time()
    res = simulate_lr(lr_sample, n, 1e-3, T1)
    o = lr_overlaps(lr_sample, T1)
    analytic = lr_fidelity_1(o) if n == 1 else lr_fidelity_2(o)
    print(f"\nLR{n}: oracle F={res.fidelity:.6f} analytic={analytic:.6f} "
          f"diff={abs(res.fidelity-analytic):.2e} norm={res.norm_sq:.8f} ({time.time()-t0:.1f}s)")

# --- LR1 amplitudes bin-wise
def lr1_err(dt):
    res = simulate_lr(lr_sample, 1, dt, T1)
    t_eff = res.t_step
    worst = 0.0
    for pol in ("R", "L"):
        for mu in (0, 1):
            analytic = (
                f_coefficient(pol, 0, mu, t_eff, res.bin_times, lr_sample)
                + 1j * f_coefficient(pol, 1, mu, t_eff, res.bin_times, lr_sample)
            ) / math.sqrt(2)
            got = res.amps[pol][mu] / math.sqrt(dt)
            worst = max(worst, float(np.max(np.abs(got - analytic))))
    return worst

rep = convergence_study(lr1_err, [4e-3, 2e-3, 1e-3, 5e-4])
print("\nLR1 amplitude ladder:\n", rep)

# --- LR2 probe pair amplitudes
def lr2_err(dt):
    res = simulate_lr(lr_sample, 2, dt, T1)
    t_eff = res.t_step
    pm = res.probe["m_indices"]
    pn = res.probe["n_indices"]
    tm = (pm + 0.5) * dt
    tn = (pn + 0.5) * dt
    worst = 0.0
    for j1 in ("R", "L"):
        first = {}
        for mu in (0, 1):
            first[mu] = (
                f_coefficient(j1, 0, mu, t_eff, tm, lr_sample)
                + 1j * f_coefficient(j1, 1, mu, t_eff, tm, lr_sample)
            ) / math.sqrt(2)
        for j2 in ("R", "L"):
            analytic = np.zeros((len(pm), len(pn), 2), dtype=complex)
            for mu in (0, 1):
                for nu in (0, 1):
                    second = f_coefficient(j2, mu, nu, t_eff, tn, lr_sample)
                    analytic[:, :, nu] += first[mu][:, None] * second[None, :]
            got = res.probe["pairs"][(j1, j2)] / dt
            worst = max(worst, float(np.max(np.abs(got - analytic))))
    return worst

rep = convergence_study(lr2_err, [4e-3, 2e-3, 1e-3])
print("\nLR2 pair amplitude ladder:\n", rep)

# --- generic evolve cross-check vs fast engine (coarse, short)
state = LatticeState.initial(2e-3, 2)  # |up, e>, vacuum
state = evolve(state, noisy, 500)
res = simulate_emission(noisy, 1.0, 2e-3)
worst = 0.0
for (em, bins), amp in state.photon_sector(1).items():
    (b, pol), = bins
    mu = em  # ground rows 0/1
    fast = res.amps[pol][mu][b]
    worst = max(worst, abs(amp - fast))
vac_err = abs(state.amplitudes.get((2, ()), 0) - res.vacuum[2]) + abs(
    state.amplitudes.get((3, ()), 0) - res.vacuum[3])
print(f"\ngeneric vs fast: photon worst={worst:.2e} vacuum err={vac_err:.2e}")
print("generic norm:", state.norm())
