"""Test whether the literal (typo'd) lambda_R^{(dd)} would change the CZ curve."""
import math
import warnings
import numpy as np

from spibench._integrals import exp_int, exp_int2
from spibench.amplitudes import cz_lambda_batch
from spibench.averaging import GaussHermiteSpec, average_nodes
from spibench.params import OverhauserDistribution
from spibench.protocols import _cz_abcd, _cz_bloch_values

warnings.simplefilter("ignore")


def lambda_dd_literal(omega_g, n, omega_e, G, T, gamma=1.0):
    """Paper-literal lambda_R^{(down,down)} overlap: passthrough with -i n_z,
    reemission prefactor +i gamma (n_x^2 + n_y^2)."""
    omega_g = np.atleast_1d(np.asarray(omega_g, dtype=float))
    n = np.atleast_2d(np.asarray(n, dtype=float))
    b = 0.5 * omega_g
    a = 0.5 * omega_e
    nz = n[:, 2]
    nperp2 = n[:, 0] ** 2 + n[:, 1] ** 2
    passthrough = -math.expm1(-G * T)
    # direct term with MINUS i nz (literal)
    direct = passthrough * (0.5 * (1 - nz) * np.exp(1j * b * T) + 0.5 * (1 + nz) * np.exp(-1j * b * T))
    acc = np.zeros(len(omega_g), dtype=complex)
    for rho in (+1, -1):
        h = -0.5j * rho  # sin(b(T-s)) expansion
        for tau in (+1, -1):
            p = -0.5 * (G + gamma) + 1j * (tau * a - rho * b)
            w = 0.5  # cos kernel
            for sigma in (+1, -1):
                g = -0.5j * sigma  # sin(b u) expansion
                z = 0.5 * (gamma - G) + 1j * (sigma * b - tau * a)
                acc = acc + h * w * g * np.exp(1j * rho * b * T) * exp_int2(p, z, T)
    second = 1j * gamma * G * nperp2 * acc  # literal +i gamma prefactor
    return direct + second


def cz_bloch_batch_variant(vecs, omega_e, G, T, dd_mode):
    omega_g = np.linalg.norm(vecs, axis=1)
    safe = np.where(omega_g[:, None] == 0.0, 1.0, omega_g[:, None])
    n = np.where(omega_g[:, None] > 0.0, vecs / safe, np.array([1.0, 0.0, 0.0]))
    lam = cz_lambda_batch(omega_g, n, omega_e, G, T)
    if dd_mode == "literal":
        lam = lam.copy()
        lam[:, 1, 1] = lambda_dd_literal(omega_g, n, omega_e, G, T)
    nz = n[:, 2]
    nplus = n[:, 0] + 1j * n[:, 1]
    a, b, c, d = _cz_abcd(lam, nz, np.conj(nplus), nplus)
    return _cz_bloch_values(a, b, c, d)


for dd_mode in ("kraus", "literal"):
    print(f"\ndd_mode = {dd_mode}: w=0.01 max over Gamma per omega_e")
    overall = 0.0
    for om in (0.03, 0.05, 0.1):
        T = math.pi / (2 * om)
        dist = OverhauserDistribution(0.01, (om, 0.0, 0.0))
        vecs, wts = average_nodes(dist, GaussHermiteSpec(15))
        best = 0.0
        for G in np.geomspace(3e-3, 1.5, 40):
            vals = cz_bloch_batch_variant(vecs, om, G, T, dd_mode)
            m = float(np.sum(vals * wts))
            best = max(best, m)
        overall = max(overall, best)
        print(f"  omega={om}: max F = {best:.4f}")
    print(f"  overall: {overall:.4f}")
