"""Compare my C coefficient against the paper's exact rational function (n_x = 1)."""
import math
import warnings
import numpy as np

from spibench.params import MagneticSample
from spibench.amplitudes import ExponentialWavepacket, cz_lambda_batch
from spibench.protocols import _cz_abcd

warnings.simplefilter("ignore")


def c_paper(G, oe, og):
    num = (
        4 * G**3 + 6 * G**4 + G * (G - og) - 3 * G**2 * og - 3 * G**3 * og
        + og**3 + og**2 * (oe**2 + og**2) + G**2 * (2 * oe**2 + 3 * og**2)
        + G * (-(oe**2) * og + og**3)
        + (G**2 + og**2) * (G**4 + (oe**2 - og**2) ** 2 + 2 * G**2 * (oe**2 + og**2))
        + (G**2 + og**2) * (4 * G**3 - G**2 * og - (oe**2) * og + og**3 + 2 * G * (2 * oe**2 + og**2))
    )
    den = (1 + 2 * G + G**2 + (oe - og) ** 2) * (G**2 + og**2) * (1 + 2 * G + G**2 + (oe + og) ** 2)
    return num / den


print(f"{'om':>8} {'Gamma':>7} {'my C':>24} {'paper C':>12} {'diff':>10}")
for om in (0.003, 0.01, 0.03, 0.1):
    for G in (0.1, 0.3, 0.6):
        s = MagneticSample.from_angles(om, om, math.pi / 2, 0.0)
        T = math.pi / (2 * om)
        lam = cz_lambda_batch([s.omega_g], [s.n], s.omega_e, G, T)[0]
        a_, b_, c_, d_ = _cz_abcd(lam, s.n_z, s.n_minus, s.n_plus)
        cp = c_paper(G, om, om)
        print(f"{om:8} {G:7} {complex(c_):24.6f} {cp:12.6f} {abs(complex(c_)-cp):10.2e}")

# also at omega_e != omega_g
print("\nwith og = 2 oe:")
for om in (0.01, 0.05):
    for G in (0.2, 0.5):
        s = MagneticSample.from_angles(2 * om, om, math.pi / 2, 0.0)
        T = math.pi / (2 * 2 * om)
        lam = cz_lambda_batch([s.omega_g], [s.n], s.omega_e, G, T)[0]
        a_, b_, c_, d_ = _cz_abcd(lam, s.n_z, s.n_minus, s.n_plus)
        cp = c_paper(G, om, 2 * om)
        print(f"{om:8} {G:7} {complex(c_):24.6f} {cp:12.6f} {abs(complex(c_)-cp):10.2e}")

# B and D vs the App C reduced forms (functions of Lambdas) at n=x
print("\nB, D consistency with reduced forms:")
for om in (0.01, 0.05):
    for G in (0.2, 0.5):
        s = MagneticSample.from_angles(om, om, math.pi / 2, 0.0)
        T = math.pi / (2 * om)
        lam = cz_lambda_batch([s.omega_g], [s.n], s.omega_e, G, T)[0]
        a_, b_, c_, d_ = _cz_abcd(lam, s.n_z, s.n_minus, s.n_plus)
        luu, lud, ldu, ldd = lam[0, 0], lam[0, 1], lam[1, 0], lam[1, 1]
        b_red = 0.5 + (-luu + ldd + 1j * lud) / math.sqrt(2)  # if i*ldu -> 1/2
        d_red = (-1 / math.sqrt(2)) * (1j * lud + ldd + luu) + luu**2
        print(f"  om={om} G={G}: B={complex(b_):.6f} Bred={b_red:.6f} "
              f"D={complex(d_):.6f} Dred={d_red:.6f}")
