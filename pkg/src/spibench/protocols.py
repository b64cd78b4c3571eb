"""Protocol fidelities: per-input, Bloch-averaged and noise-averaged.

Three protocols are covered:

- PNS: mapping an energy qubit onto a photon-number superposition.
- CZ:  the heralded photon-photon controlled-Z gate built from two
  sequential single-photon scatterings separated by quarter-period spin
  precessions of duration T_g = pi/(2 omega_g_bar).
- LR:  the excite/emit/precess cluster-state chain with unit-step time
  T_1 = pi/(2 omega_g_bar).

Protocol timing always uses the nominal external-field precession, never
the sampled one, because the frozen noise draw is not knowable by the
experimenter.  Bloch-sphere averages use the closed forms; their
numerical-integration counterparts live in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfcx

from .amplitudes import ExponentialWavepacket, cz_lambda_batch, lr_overlap_batch
from .averaging import GaussHermiteSpec, MonteCarloSpec, average_nodes
from .params import BlochQubit, MagneticSample, OverhauserDistribution, PhysicalConfig

__all__ = [
    "pns_fidelity",
    "pns_fidelity_bloch",
    "pns_fidelity_averaged",
    "CzCoefficients",
    "cz_coefficients",
    "cz_fidelity",
    "cz_fidelity_bloch",
    "cz_fidelity_averaged",
    "LrOverlapSet",
    "lr_overlaps",
    "lr_error_probability",
    "lr_fidelity_1",
    "lr_fidelity_2",
    "lr_fidelity_ideal_n",
    "lr_fidelity_averaged",
]

_SQRT2 = math.sqrt(2.0)


# ---------------------------------------------------------------------------
# Photon-number superposition


def pns_fidelity(qubit, omega_o):
    """Fidelity of the emitted photon-number qubit for one frozen field of
    magnitude ``omega_o`` (angle-independent)."""
    if omega_o < 0:
        raise ValueError("omega_o must be nonnegative")
    x2 = (0.5 * omega_o) ** 2
    a2 = abs(qubit.alpha) ** 2
    b2 = abs(qubit.beta) ** 2
    return (a2 * a2 + 2.0 * a2 * b2) / (1.0 + x2) + b2 * b2


def pns_fidelity_bloch(omega_o):
    """Uniform Bloch-sphere average of pns_fidelity, closed form."""
    if omega_o < 0:
        raise ValueError("omega_o must be nonnegative")
    x2 = (0.5 * omega_o) ** 2
    return (1.0 + x2 / 3.0) / (1.0 + x2)


def pns_fidelity_averaged(w_over_gamma):
    """Overhauser average of the Bloch-averaged fidelity.

    Uses the scaled complementary error function erfcx(z) = e^{z^2}erfc(z)
    to avoid the overflow of the raw e^{2/w^2} factor; tiny widths switch
    to the series 1 - w^2/2 + (5/8) w^4.
    """
    w = float(w_over_gamma)
    if w < 0:
        raise ValueError("w_over_gamma must be nonnegative")
    if w < 1e-4:
        return 1.0 - 0.5 * w * w + 0.625 * w**4
    num = 8.0 * w + w**3 - 8.0 * math.sqrt(2.0 * math.pi) * erfcx(math.sqrt(2.0) / w)
    return num / (3.0 * w**3)


# ---------------------------------------------------------------------------
# Photon-photon CZ gate


@dataclass(frozen=True)
class CzCoefficients:
    """The four branch amplitudes of the realistic gate output."""

    a: complex
    b: complex
    c: complex
    d: complex

    def as_array(self):
        return np.array([self.a, self.b, self.c, self.d])


def _cz_abcd(lam, nz, nminus, nplus):
    """Branch coefficients from the Lambda overlap matrix, vectorized.

    ``lam``: (..., 2, 2) indexed [initial spin, final spin]; n components
    broadcast against the leading axes.  c_minus = sin(theta) e^{-i phi}
    + i cos(theta) reduces to n_minus + i n_z.
    """
    c_minus = nminus + 1j * nz
    c_plus = nplus + 1j * nz
    l_uu, l_ud = lam[..., 0, 0], lam[..., 0, 1]
    l_du, l_dd = lam[..., 1, 0], lam[..., 1, 1]
    a = c_minus * np.ones_like(l_uu)
    b = ((-l_uu + 1j * l_du) * (1.0 - 1j * nz) + (l_dd + 1j * l_ud) * nminus) / _SQRT2
    c = ((c_minus - 1.0) * l_uu + 1j * (1.0 + c_plus) * l_du) / _SQRT2
    d = l_ud * l_du + l_uu * l_uu - 1j * l_dd * l_du - 1j * l_du * l_uu
    return a, b, c, d


def cz_coefficients(sample, wavepacket, t_gate):
    """Assemble the gate coefficients for one frozen field configuration.

    ``wavepacket`` must be the exponential input; ``t_gate`` is the
    precession window T_g between the two photons (nominal timing).
    """
    if not isinstance(wavepacket, ExponentialWavepacket):
        raise ValueError("gate coefficients require an exponential input wavepacket")
    lam = cz_lambda_batch(
        [sample.omega_g], [sample.n], sample.omega_e, wavepacket.big_gamma, t_gate
    )[0]
    a, b, c, d = _cz_abcd(lam, sample.n_z, sample.n_minus, sample.n_plus)
    return CzCoefficients(complex(a), complex(b), complex(c), complex(d))


def cz_fidelity(control, target, coeffs):
    """Gate fidelity for specific control/target photon qubits (spin
    measurement heralded on up; no renormalization by success
    probability)."""
    p1, q1 = abs(control.alpha) ** 2, abs(control.beta) ** 2
    p2, q2 = abs(target.alpha) ** 2, abs(target.beta) ** 2
    amp = coeffs.a * p1 * p2 + coeffs.b * q1 * p2 + coeffs.c * p1 * q2 + coeffs.d * q1 * q2
    return abs(amp) ** 2


def cz_fidelity_bloch(coeffs):
    """Closed-form double Bloch-sphere average of cz_fidelity."""
    return _cz_bloch_values(*(np.asarray(x) for x in
                              (coeffs.a, coeffs.b, coeffs.c, coeffs.d))).item()


def _cz_bloch_values(a, b, c, d):
    mods = (np.abs(a) ** 2 + np.abs(b) ** 2 + np.abs(c) ** 2 + np.abs(d) ** 2) / 9.0
    pairs18 = (a * np.conj(b) + a * np.conj(c) + b * np.conj(d) + c * np.conj(d)).real / 9.0
    pairs36 = (a * np.conj(d) + b * np.conj(c)).real / 18.0
    return mods + pairs18 + pairs36


def _cz_bloch_batch(vecs, omega_e, big_gamma, t_gate):
    omega_g = np.linalg.norm(vecs, axis=1)
    safe = np.where(omega_g[:, None] == 0.0, 1.0, omega_g[:, None])
    n = np.where(omega_g[:, None] > 0.0, vecs / safe, np.array([1.0, 0.0, 0.0]))
    lam = cz_lambda_batch(omega_g, n, omega_e, big_gamma, t_gate)
    nz = n[:, 2]
    nplus = n[:, 0] + 1j * n[:, 1]
    a, b, c, d = _cz_abcd(lam, nz, np.conj(nplus), nplus)
    return _cz_bloch_values(a, b, c, d)


def cz_fidelity_averaged(config, spec):
    """Overhauser average of the Bloch-averaged gate fidelity.

    Timing and the noise-distribution offset come from the nominal
    omega_g_bar; returns (mean, error estimate).
    """
    if config.big_gamma is None:
        raise ValueError("config.big_gamma (input photon bandwidth) is required")
    if config.omega_g_bar <= 0:
        raise ValueError("omega_g_bar must be positive to set the gate window")
    t_gate = math.pi / (2.0 * config.omega_g_bar)
    dist = OverhauserDistribution(config.w, (config.omega_g_bar, 0.0, 0.0))

    def batch(vectors):
        return _cz_bloch_batch(vectors, config.omega_e, config.big_gamma, t_gate)

    return _averaged(batch, dist, spec)


def _averaged(batch_fn, dist, spec):
    """Weighted mean of a vectorized node function, with error estimate."""
    vecs, wts = average_nodes(dist, spec)
    values = batch_fn(vecs)
    if not np.all(np.isfinite(values)):
        bad = int(np.argmax(~np.isfinite(values)))
        raise ValueError(f"non-finite fidelity at node {bad}: field vector {vecs[bad]}")
    mean = float(np.sum(values * wts))
    if dist.w == 0.0:
        return mean, 0.0
    if isinstance(spec, MonteCarloSpec):
        return mean, float(np.std(values, ddof=1) / math.sqrt(len(values)))
    coarse = spec.nodes - 4
    if coarse < 5:
        return mean, 0.0
    vecs_c, wts_c = average_nodes(dist, GaussHermiteSpec(coarse))
    mean_c = float(np.sum(batch_fn(vecs_c) * wts_c))
    return mean, abs(mean - mean_c)


# ---------------------------------------------------------------------------
# Lindner-Rudolph cluster chain


@dataclass(frozen=True)
class LrOverlapSet:
    """The eight photon-mode overlaps O_j^{(zeta,mu)}.

    ``values`` is (2, 2, 2) indexed [pol (R=0, L=1), initial spin,
    final spin]; ``t_step`` is the unit-step time the overlaps were
    computed at, which also sets the norm of the ideal reference modes.
    """

    values: np.ndarray
    t_step: float

    def get(self, pol, zeta, mu):
        r = {"R": 0, "L": 1}[pol]
        z = {"up": 0, "down": 1}[zeta] if isinstance(zeta, str) else zeta
        m = {"up": 0, "down": 1}[mu] if isinstance(mu, str) else mu
        return complex(self.values[r, z, m])

    @property
    def mode_norm_sq(self):
        """Squared norm of the reference exponential mode on [0, t_step]."""
        return -math.expm1(-self.t_step)


def lr_overlaps(sample, t_step):
    """All eight overlaps at unit-step time ``t_step`` for one sample."""
    vals = lr_overlap_batch([sample.omega_g], [sample.n], sample.omega_e, t_step)[0]
    return LrOverlapSet(vals, t_step)


def lr_error_probability(omega_e_over_gamma):
    """Wrong-polarization (spin bit-flip) probability per unit step."""
    if omega_e_over_gamma < 0:
        raise ValueError("omega_e_over_gamma must be nonnegative")
    x2 = omega_e_over_gamma**2
    return x2 / (2.0 * (1.0 + x2))


def _lr_combo_1(o):
    """Overlap combination for the one-step fidelity; o is (..., 2, 2, 2)."""
    r, l = o[..., 0, :, :], o[..., 1, :, :]
    return (
        r[..., 0, 0] + l[..., 0, 0]
        + 1j * r[..., 0, 1] - 1j * l[..., 0, 1]
        + 1j * r[..., 1, 0] + 1j * l[..., 1, 0]
        - r[..., 1, 1] + l[..., 1, 1]
    )


def lr_fidelity_1(overlaps):
    """|<ideal one-photon chain | realistic state>|^2 via the overlap
    combination; the 1/(2 sqrt 2) normalization sits inside the modulus
    and the ideal reference state is normalized on its step window."""
    combo = _lr_combo_1(overlaps.values)
    return abs(combo / (2.0 * _SQRT2)) ** 2 / overlaps.mode_norm_sq


def _lr_combo_2(o):
    r, l = o[..., 0, :, :], o[..., 1, :, :]
    total = 0.0
    for mu in (0, 1):
        first_r = r[..., 0, mu] + 1j * r[..., 1, mu]
        first_l = l[..., 0, mu] + 1j * l[..., 1, mu]
        second_r = (
            r[..., mu, 0] - l[..., mu, 0] + 1j * r[..., mu, 1] + 1j * l[..., mu, 1]
        )
        second_l = (
            r[..., mu, 0] + l[..., mu, 0] + 1j * r[..., mu, 1] - 1j * l[..., mu, 1]
        )
        total = total + first_r * second_r + first_l * second_l
    return total


def lr_fidelity_2(overlaps):
    """Two-step fidelity from products of overlap combinations per
    intermediate spin path (ideal reference normalized per photon)."""
    return abs(_lr_combo_2(overlaps.values) / 4.0) ** 2 / overlaps.mode_norm_sq**2


def lr_fidelity_ideal_n(n_steps, k, omega_e_over_gamma):
    """Noise-free closed-form fidelity after ``n_steps`` unit steps with
    Lande ratio k (valid to fourth order in omega_e/gamma)."""
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    p = lr_error_probability(omega_e_over_gamma)
    f1 = (1.0 - 0.5 * (1.0 + k * k) * p) ** 2
    step = (1.0 - 0.5 * (1.0 - k + k * k) * p) ** 2
    return f1 * step ** (n_steps - 1)


def _lr_batch(vecs, omega_e, t_step, n_steps):
    omega_g = np.linalg.norm(vecs, axis=1)
    safe = np.where(omega_g[:, None] == 0.0, 1.0, omega_g[:, None])
    n = np.where(omega_g[:, None] > 0.0, vecs / safe, np.array([1.0, 0.0, 0.0]))
    o = lr_overlap_batch(omega_g, n, omega_e, t_step)
    norm_sq = -math.expm1(-t_step)
    if n_steps == 1:
        return np.abs(_lr_combo_1(o) / (2.0 * _SQRT2)) ** 2 / norm_sq
    return np.abs(_lr_combo_2(o) / 4.0) ** 2 / norm_sq**2


def lr_fidelity_averaged(config, n_steps, spec):
    """Overhauser average of the one- or two-step fidelity.

    The unit-step time is pi/(2 omega_g_bar) from the nominal field;
    returns (mean, error estimate).
    """
    if n_steps not in (1, 2):
        raise ValueError("n_steps must be 1 or 2")
    if config.omega_g_bar <= 0:
        raise ValueError("omega_g_bar must be positive to set the step time")
    t_step = math.pi / (2.0 * config.omega_g_bar)
    dist = OverhauserDistribution(config.w, (config.omega_g_bar, 0.0, 0.0))

    def batch(vectors):
        return _lr_batch(vectors, config.omega_e, t_step, n_steps)

    return _averaged(batch, dist, spec)
