"""Analytic emitter Kraus operators and the discrete collision unitary.

Emitter Hilbert space: spin tensor energy, basis order fixed as
(up-g, down-g, up-e, down-e).  The collision unitary acts on
emitter x bin_R x bin_L with each time-bin mode truncated to
occupations {0, 1} (dimension 16), ordering index = 4*emitter + 2*nR + nL.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh

from .params import GAMMA, MagneticSample

__all__ = [
    "UP_G",
    "DOWN_G",
    "UP_E",
    "DOWN_E",
    "ground_rotation",
    "trion_decay",
    "magnetic_hamiltonian",
    "no_jump",
    "jump_minus",
    "jump_plus",
    "CollisionUnitary",
    "collision_unitary",
    "collision_blocks",
]

UP_G, DOWN_G, UP_E, DOWN_E = 0, 1, 2, 3

_SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SY = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
_SZ = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

MAX_GAMMA_DT = 0.01


def _n_dot_sigma(sample):
    nx, ny, nz = sample.n
    return nx * _SX + ny * _SY + nz * _SZ


def ground_rotation(t, sample):
    """2x2 ground-spin propagator exp(-i (omega_g t / 2) n.sigma)."""
    half = 0.5 * sample.omega_g * t
    return np.cos(half) * np.eye(2, dtype=complex) - 1j * np.sin(half) * _n_dot_sigma(sample)


def trion_decay(t, sample, gamma=GAMMA):
    """2x2 trion-spin propagator e^{-gamma t/2} exp(-i (omega_e t / 2) s_x)."""
    half = 0.5 * sample.omega_e * t
    rot = np.cos(half) * np.eye(2, dtype=complex) - 1j * np.sin(half) * _SX
    return np.exp(-0.5 * gamma * t) * rot


def magnetic_hamiltonian(sample):
    """4x4 spin Hamiltonian: ground block (omega_g/2) n.sigma, trion block
    (omega_e/2) s_x."""
    h = np.zeros((4, 4), dtype=complex)
    h[:2, :2] = 0.5 * sample.omega_g * _n_dot_sigma(sample)
    h[2:, 2:] = 0.5 * sample.omega_e * _SX
    return h


def no_jump(t, sample, gamma=GAMMA):
    """No-jump Kraus operator: unitary ground precession, decaying trion
    precession."""
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    k = np.zeros((4, 4), dtype=complex)
    k[:2, :2] = ground_rotation(t, sample)
    k[2:, 2:] = trion_decay(t, sample, gamma)
    return k


def jump_minus(pol, gamma=GAMMA):
    """Emission jump operator: R -> sqrt(gamma)|up-g><up-e|,
    L -> sqrt(gamma)|down-g><down-e|."""
    j = np.zeros((4, 4), dtype=complex)
    root = np.sqrt(gamma)
    if pol == "R":
        j[UP_G, UP_E] = root
    elif pol == "L":
        j[DOWN_G, DOWN_E] = root
    else:
        raise ValueError(f"polarization must be 'R' or 'L', got {pol!r}")
    return j


def jump_plus(pol, gamma=GAMMA):
    """Absorption operator, equal to -jump_minus(pol)^dagger."""
    return -jump_minus(pol, gamma).conj().T


@dataclass(frozen=True)
class CollisionUnitary:
    """Exact one-step propagator on emitter x bin_R x bin_L (16-dim)."""

    entries: np.ndarray
    delta_t: float


def _bin_ops():
    b = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)  # annihilation
    eye = np.eye(2, dtype=complex)
    return b, eye


def collision_unitary(delta_t, sample, gamma=GAMMA):
    """U_n = exp(-i delta_t (H_s + V_n)) by exact eigendecomposition.

    The step must satisfy gamma*delta_t <= 0.01, the validity region of
    the single-occupation bin truncation.
    """
    if not 0.0 < gamma * delta_t <= MAX_GAMMA_DT:
        raise ValueError(
            f"gamma*delta_t = {gamma * delta_t} outside (0, {MAX_GAMMA_DT}]: "
            "bin truncation at single occupation is not valid"
        )
    b, eye2 = _bin_ops()
    eye4 = np.eye(4, dtype=complex)

    # Emitter lowering operators in the 4-dim basis.
    sig_up = np.zeros((4, 4), dtype=complex)  # |up-g><up-e|
    sig_up[UP_G, UP_E] = 1.0
    sig_down = np.zeros((4, 4), dtype=complex)  # |down-g><down-e|
    sig_down[DOWN_G, DOWN_E] = 1.0

    create_r = np.kron(b.conj().T, eye2)  # on bin_R x bin_L
    create_l = np.kron(eye2, b.conj().T)

    coupling = np.sqrt(gamma / delta_t)
    a = np.kron(sig_down, create_l) + np.kron(sig_up, create_r)
    v = 1j * coupling * (a - a.conj().T)

    h = np.kron(magnetic_hamiltonian(sample), np.eye(4, dtype=complex))
    gen = h + v
    vals, vecs = eigh(gen)
    u = (vecs * np.exp(-1j * delta_t * vals)) @ vecs.conj().T
    return CollisionUnitary(u, delta_t)


def collision_blocks(cu):
    """Sub-blocks of the collision unitary indexed by bin transitions.

    Returns a dict mapping (out_occ, in_occ) to the 4x4 emitter block,
    where occ is (nR, nL) with occupations in {0, 1}.
    """
    u = cu.entries.reshape(4, 2, 2, 4, 2, 2)
    blocks = {}
    for o_r in (0, 1):
        for o_l in (0, 1):
            for i_r in (0, 1):
                for i_l in (0, 1):
                    blocks[((o_r, o_l), (i_r, i_l))] = np.ascontiguousarray(
                        u[:, o_r, o_l, :, i_r, i_l]
                    )
    return blocks
