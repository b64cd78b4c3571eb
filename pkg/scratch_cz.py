"""Scan CZ fidelity over (omega_e, Gamma) at w=0 and w=0.01."""
import warnings
import numpy as np

from spibench.params import PhysicalConfig
from spibench.averaging import GaussHermiteSpec
from spibench.protocols import cz_fidelity_averaged, lr_fidelity_averaged

warnings.simplefilter("ignore")

gammas = np.geomspace(3e-3, 1.5, 40)

print("w = 0 (no noise): max over Gamma per omega_e")
for om in (1e-4, 1e-3, 3e-3, 0.01, 0.03, 0.05, 0.1):
    best, bg = 0.0, None
    for G in gammas:
        cfg = PhysicalConfig(omega_e=om, omega_g_bar=om, w=0.0, big_gamma=G)
        m, _ = cz_fidelity_averaged(cfg, GaussHermiteSpec(15))
        if m > best:
            best, bg = m, G
    print(f"  omega={om:7}: max F = {best:.4f} at Gamma = {bg:.4f}")

print("\nw = 0.01: max over Gamma per omega_e")
overall = 0.0
for om in (0.02, 0.03, 0.05, 0.08, 0.1, 0.15, 0.2, 0.3):
    best, bg = 0.0, None
    for G in gammas:
        cfg = PhysicalConfig(omega_e=om, omega_g_bar=om, w=0.01, big_gamma=G)
        m, _ = cz_fidelity_averaged(cfg, GaussHermiteSpec(15))
        if m > best:
            best, bg = m, G
    overall = max(overall, best)
    print(f"  omega={om:7}: max F = {best:.4f} at Gamma = {bg:.4f}")
print(f"  overall best over (omega_e, Gamma): {overall:.4f}")

# LR with normalization now
from spibench.averaging import MonteCarloSpec
cfg = PhysicalConfig(omega_e=0.2, k_ratio=2.0, w=0.1)
m1, e1 = lr_fidelity_averaged(cfg, 1, GaussHermiteSpec(15))
m2, e2 = lr_fidelity_averaged(cfg, 2, GaussHermiteSpec(15))
m1b, e1b = lr_fidelity_averaged(cfg, 1, GaussHermiteSpec(21))
print(f"\nLR normalized: F1={m1:.4f} (21-node {m1b:.4f})  F2={m2:.4f}")
