"""Scratch validation: f/lambda closed forms vs literal transcriptions + quadrature."""
import numpy as np
from scipy import integrate

from spibench.params import MagneticSample
from spibench.amplitudes import (
    ExponentialWavepacket, f_coefficient, lambda_coefficient, lambda_overlap,
    lr_overlap_batch, cz_lambda_batch, o_overlap,
)
from spibench._integrals import exp_int, exp_int2

rng = np.random.default_rng(7)

# --- exp_int / exp_int2 vs brute numeric
for _ in range(50):
    q = complex(rng.uniform(-3, -0.2), rng.uniform(-5, 5))
    T = rng.uniform(0.5, 30)
    ref = integrate.quad(lambda t: np.exp(q * t).real, 0, T)[0] + 1j * integrate.quad(lambda t: np.exp(q * t).imag, 0, T)[0]
    assert abs(exp_int(q, T) - ref) < 1e-9, (q, T)

for _ in range(80):
    p = complex(rng.uniform(-3, -0.3), rng.uniform(-4, 4))
    z = complex(rng.uniform(-1, 1), rng.uniform(-2, 2)) * 10 ** rng.uniform(-9, 0)
    T = rng.uniform(0.5, 40)
    f = lambda s: np.exp(p * s) * ((np.exp(z * s) - 1) / z if abs(z * s) > 1e-8 else s * (1 + z * s / 2))
    ref = integrate.quad(lambda s: f(s).real, 0, T, limit=300)[0] + 1j * integrate.quad(lambda s: f(s).imag, 0, T, limit=300)[0]
    got = exp_int2(p, z, T)
    assert abs(got - ref) < 2e-8, (p, z, T, got, ref)
print("exp_int/exp_int2 ok")

# --- f vs literal Appendix-style transcription
def f_literal(pol, zeta, mu, t, tp, s):
    g = 1.0
    nx, ny, nz = s.n
    a = s.omega_e / 2
    b = s.omega_g / 2
    dec = np.sqrt(g) * np.exp(-g * tp / 2)
    D = t - tp
    if pol == "R" and zeta == 0 and mu == 0:
        return dec * np.cos(a * tp) * (np.cos(b * D) - 1j * nz * np.sin(b * D))
    if pol == "R" and zeta == 0 and mu == 1:
        return -1j * dec * (nx + 1j * ny) * np.cos(a * tp) * np.sin(b * D)
    if pol == "L" and zeta == 0 and mu == 0:
        return 1j * dec * (ny + 1j * nx) * np.sin(a * tp) * np.sin(b * D)
    if pol == "L" and zeta == 0 and mu == 1:
        return -1j * dec * np.sin(a * tp) * (np.cos(b * D) + 1j * nz * np.sin(b * D))
    # symmetry partners
    if pol == "L" and zeta == 1 and mu == 1:
        return np.conj(f_literal("R", 0, 0, t, tp, s))
    if pol == "L" and zeta == 1 and mu == 0:
        return -np.conj(f_literal("R", 0, 1, t, tp, s))
    if pol == "R" and zeta == 1 and mu == 1:
        return np.conj(f_literal("L", 0, 0, t, tp, s))
    if pol == "R" and zeta == 1 and mu == 0:
        return -np.conj(f_literal("L", 0, 1, t, tp, s))
    raise ValueError

worst = 0.0
for _ in range(200):
    s = MagneticSample.from_angles(rng.uniform(0, 2), rng.uniform(0, 1), rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))
    t = rng.uniform(0.1, 20)
    tp = rng.uniform(0, t)
    for pol in "RL":
        for zeta in (0, 1):
            for mu in (0, 1):
                d = abs(f_coefficient(pol, zeta, mu, t, tp, s) - f_literal(pol, zeta, mu, t, tp, s))
                worst = max(worst, d)
print("f vs literal worst:", worst)
assert worst < 1e-13

# --- lambda closed vs quadrature
wp = ExponentialWavepacket(0.7)
worst = 0.0
for _ in range(30):
    s = MagneticSample.from_angles(rng.uniform(0, 1.5), rng.uniform(0, 0.8), rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))
    t = rng.uniform(5, 25)
    tp = rng.uniform(0, t)
    for pol in "RL":
        for zeta in (0, 1):
            for mu in (0, 1):
                c = lambda_coefficient(pol, zeta, mu, t, tp, s, wp, method="closed")
                q = lambda_coefficient(pol, zeta, mu, t, tp, s, wp, method="quad", abs_tol=1e-12)
                worst = max(worst, abs(c - q))
print("lambda closed vs quad worst:", worst)
assert worst < 1e-9

# --- Lambda overlap closed vs nested quadrature (moderate T_g)
s = MagneticSample.from_angles(0.15, 0.12, np.pi / 2 - 0.2, 0.4)
T_g = 24.0
import warnings
for G in (0.3, 1.0, 1.7):
    wp = ExponentialWavepacket(G)
    for zeta in (0, 1):
        for mu in (0, 1):
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                c = lambda_overlap(zeta, mu, T_g, s, wp, method="closed")
                q = lambda_overlap(zeta, mu, T_g, s, wp, method="quad", abs_tol=1e-10)
            d = abs(c - q)
            assert d < 1e-8, (G, zeta, mu, c, q, d)
print("Lambda closed vs nested quad ok")

# --- Appendix C ideal limit of Lambda_uu
for G in (0.01, 0.1, 0.5, 1.0, 2.0):
    om = 1e-4
    s = MagneticSample.from_angles(om, om, np.pi / 2, 0.0)
    T = np.pi / (2 * om)
    lam = cz_lambda_batch([s.omega_g], [s.n], s.omega_e, G, T)[0, 0, 0]
    ideal = (-1 + G**2) / (np.sqrt(2) * (1 + G) ** 2)
    print(f"  Gamma={G}: Lambda_uu={lam:.8f} ideal={ideal:.8f} diff={abs(lam-ideal):.2e}")
    assert abs(lam - ideal) < 1e-4

# --- O overlap quadrature vs closed batch
worst = 0.0
for _ in range(15):
    s = MagneticSample.from_angles(rng.uniform(0.05, 0.6), rng.uniform(0, 0.4), rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))
    T1 = np.pi / (2 * max(s.omega_g, 0.05))
    batch = lr_overlap_batch([s.omega_g], [s.n], s.omega_e, T1)[0]
    for pol, r in (("R", 0), ("L", 1)):
        for zeta in (0, 1):
            for mu in (0, 1):
                q = o_overlap(pol, zeta, mu, T1, s)
                worst = max(worst, abs(q - batch[r, zeta, mu]))
print("O quad vs closed worst:", worst)
assert worst < 1e-9
print("ALL SCRATCH CHECKS PASSED")
