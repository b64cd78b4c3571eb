"""Closed-form wavefunction coefficients of the spin-photon interface.

Emission coefficients f (one photon released by an excited emitter),
the no-emission coefficient f0, scattering coefficients lambda (one
R-polarized input photon on a ground emitter), and the photon-mode
overlaps O (emission vs ideal exponential mode) and Lambda (scattered
output vs input).

All eight f and all eight lambda are evaluated from the operator
composition

    f_j^{(zeta,mu)}(t,t')      = sqrt(gamma) G(t-t')[mu,r_j] E(t')[r_j,zeta]
    lambda_R^{(zeta,mu)}(t,t') = xi(t') G(t)[mu,zeta]
                                 - gamma G(t-t')[mu,0] Jc(t';zeta)
    lambda_L^{(zeta,mu)}(t,t') = i gamma G(t-t')[mu,1] Js(t';zeta)

where G is the unitary ground-spin rotation about the sampled axis n,
E the decaying trion rotation about x, r_R = up, r_L = down, and
Jc/Js are the inner absorption-reemission integrals with cos/sin trion
kernels.  This composition reproduces the tabulated closed forms and
their conjugation symmetries identically; the symmetries are asserted
in the test suite rather than being used as shortcuts.

Spin indices: 0 = up, 1 = down.  Polarizations: "R", "L".
"""

from __future__ import annotations

import math
import warnings

import numpy as np

from ._integrals import QuadratureError, complex_quad, exp_int, exp_int2, oscillation_points
from .params import GAMMA

__all__ = [
    "SPIN_INDEX",
    "POL_ROW",
    "Wavepacket",
    "ExponentialWavepacket",
    "TruncatedExponentialWavepacket",
    "SampledWavepacket",
    "f_coefficient",
    "f0_coefficient",
    "lambda_coefficient",
    "o_overlap",
    "lr_overlap_batch",
    "lambda_overlap",
    "cz_lambda_batch",
    "T_INF",
]

SPIN_INDEX = {"up": 0, "down": 1}
POL_ROW = {"R": 0, "L": 1}

# Long-time convention: e^{-gamma*T_INF/2} ~ 2e-9.
T_INF = 40.0


# ---------------------------------------------------------------------------
# Input wavepackets


class Wavepacket:
    """Normalized single-photon temporal envelope on t >= 0."""

    def __call__(self, t):
        raise NotImplementedError

    def support(self):
        """(t_min, t_max) beyond which the envelope is negligible/zero."""
        raise NotImplementedError


class ExponentialWavepacket(Wavepacket):
    """xi(t) = sqrt(Gamma) e^{-Gamma t/2}; the paper's gate input."""

    def __init__(self, big_gamma):
        if big_gamma <= 0:
            raise ValueError(f"big_gamma must be positive, got {big_gamma}")
        self.big_gamma = float(big_gamma)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.where(t >= 0, np.sqrt(self.big_gamma) * np.exp(-0.5 * self.big_gamma * t), 0.0)
        return out if out.ndim else complex(out)

    def support(self):
        return 0.0, 2.0 * T_INF / self.big_gamma


class TruncatedExponentialWavepacket(Wavepacket):
    """sqrt(gamma) e^{-gamma t/2} on [0, T], renormalized on its support."""

    def __init__(self, gamma, duration):
        if gamma <= 0 or duration <= 0:
            raise ValueError("gamma and duration must be positive")
        self.gamma = float(gamma)
        self.duration = float(duration)
        self._norm = 1.0 / math.sqrt(-math.expm1(-gamma * duration))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        inside = (t >= 0) & (t <= self.duration)
        out = np.where(inside, self._norm * np.sqrt(self.gamma) * np.exp(-0.5 * self.gamma * t), 0.0)
        return out if out.ndim else complex(out)

    def support(self):
        return 0.0, self.duration


class SampledWavepacket(Wavepacket):
    """Envelope given on a time grid; linearly interpolated, zero outside."""

    def __init__(self, times, values, norm_tol=1e-10):
        times = np.asarray(times, dtype=float)
        values = np.asarray(values, dtype=complex)
        if times.ndim != 1 or times.shape != values.shape:
            raise ValueError("times and values must be matching 1-d arrays")
        if np.any(np.diff(times) <= 0):
            raise ValueError("times must be strictly increasing")
        norm = np.trapezoid(np.abs(values) ** 2, times)
        if abs(norm - 1.0) > norm_tol:
            raise ValueError(f"wavepacket norm^2 = {norm}, must be 1 within {norm_tol}")
        self.times = times
        self.values = values

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        re = np.interp(t, self.times, self.values.real, left=0.0, right=0.0)
        im = np.interp(t, self.times, self.values.imag, left=0.0, right=0.0)
        out = re + 1j * im
        return out if out.ndim else complex(out)

    def support(self):
        return float(self.times[0]), float(self.times[-1])


# ---------------------------------------------------------------------------
# Matrix-element building blocks


def _ground_entry(mu, nu, tau, sample):
    """G(tau)[mu, nu] for scalar or array tau."""
    half = 0.5 * sample.omega_g * np.asarray(tau, dtype=float)
    c, s = np.cos(half), np.sin(half)
    if mu == nu:
        sign = 1.0 if mu == 0 else -1.0
        return c - 1j * sign * sample.n_z * s
    off = sample.n_minus if mu == 0 else sample.n_plus
    return -1j * off * s


def _trion_entry(r, zeta, t, sample, gamma):
    """E(t)[r, zeta] for scalar or array t (includes the decay factor)."""
    t = np.asarray(t, dtype=float)
    half = 0.5 * sample.omega_e * t
    decay = np.exp(-0.5 * gamma * t)
    if r == zeta:
        return decay * np.cos(half)
    return -1j * decay * np.sin(half)


def _as_spin(label):
    if label in (0, 1):
        return label
    try:
        return SPIN_INDEX[label]
    except (KeyError, TypeError):
        raise ValueError(f"spin label must be 'up'/'down' or 0/1, got {label!r}") from None


def f_coefficient(pol, zeta, mu, t, t_prime, sample, gamma=GAMMA):
    """Emission amplitude f_pol^{(zeta,mu)}(t, t'): photon released at t',
    observed at t, initial spin zeta, final spin mu.

    ``t_prime`` may be an array; requires 0 <= t' <= t.
    """
    zeta, mu = _as_spin(zeta), _as_spin(mu)
    r = POL_ROW[pol]
    tp = np.asarray(t_prime, dtype=float)
    if np.any(tp < 0) or np.any(tp > t + 1e-12):
        raise ValueError("t_prime must satisfy 0 <= t_prime <= t")
    out = (
        math.sqrt(gamma)
        * _ground_entry(mu, r, t - tp, sample)
        * _trion_entry(r, zeta, tp, sample, gamma)
    )
    return out if np.ndim(out) else complex(out)


def f0_coefficient(zeta, mu, t, sample, gamma=GAMMA):
    """Still-excited (no-emission) amplitude at time t."""
    if np.any(np.asarray(t) < 0):
        raise ValueError("t must be nonnegative")
    zeta, mu = _as_spin(zeta), _as_spin(mu)
    out = _trion_entry(mu, zeta, t, sample, gamma)
    return out if np.ndim(out) else complex(out)


# ---------------------------------------------------------------------------
# Scattering coefficients

# Plus/minus expansion G(tau)[mu, nu] = sum_rho coef_rho e^{i rho b tau}.


def _g_coef(mu, nu, nz, nplus, nminus):
    if mu == 0 and nu == 0:
        return 0.5 * (1.0 - nz), 0.5 * (1.0 + nz)
    if mu == 0 and nu == 1:
        return -0.5 * nminus, 0.5 * nminus
    if mu == 1 and nu == 0:
        return -0.5 * nplus, 0.5 * nplus
    return 0.5 * (1.0 + nz), 0.5 * (1.0 - nz)


def _inner_integral_closed(trig, t_prime, zeta, sample, wavepacket, gamma):
    """Jc/Js for an exponential input, exact in terms of exp_int."""
    big_gamma = wavepacket.big_gamma
    a = 0.5 * sample.omega_e
    b = 0.5 * sample.omega_g
    total = 0.0 + 0.0j
    for tau in (+1, -1):
        w_tau = 0.5 if trig == "cos" else -0.5j * tau
        for sigma, g_sig in zip((+1, -1), _g_coef(0, zeta, sample.n_z, sample.n_plus, sample.n_minus)):
            z = 0.5 * (gamma - big_gamma) + 1j * (sigma * b - tau * a)
            pref = math.sqrt(big_gamma) * w_tau * g_sig * np.exp((-0.5 * gamma + 1j * tau * a) * t_prime)
            total += pref * exp_int(z, t_prime)
    return total


def _inner_integral_quad(trig, t_prime, zeta, sample, wavepacket, gamma, abs_tol):
    a = 0.5 * sample.omega_e
    kernel = np.cos if trig == "cos" else np.sin

    def integrand(u):
        return (
            wavepacket(u)
            * np.exp(-0.5 * gamma * (t_prime - u))
            * kernel(a * (t_prime - u))
            * _ground_entry(0, zeta, u, sample)
        )

    pts = oscillation_points(0.0, t_prime, [a, 0.5 * sample.omega_g])
    return complex_quad(integrand, 0.0, t_prime, abs_tol=abs_tol, points=pts)


def lambda_coefficient(
    pol, zeta, mu, t, t_prime, sample, wavepacket,
    gamma=GAMMA, method="auto", abs_tol=1e-10,
):
    """Scattering amplitude lambda_pol^{(zeta,mu)}(t, t') for an R input.

    ``method``: "closed" (exponential input only), "quad" (any input), or
    "auto" which picks the closed form when available.
    """
    zeta, mu = _as_spin(zeta), _as_spin(mu)
    if not 0 <= t_prime <= t:
        raise ValueError("t_prime must satisfy 0 <= t_prime <= t")
    if method == "auto":
        method = "closed" if isinstance(wavepacket, ExponentialWavepacket) else "quad"
    if method == "closed" and not isinstance(wavepacket, ExponentialWavepacket):
        raise ValueError("closed-form path requires an exponential wavepacket")

    trig = "cos" if pol == "R" else "sin"
    if method == "closed":
        inner = _inner_integral_closed(trig, t_prime, zeta, sample, wavepacket, gamma)
    else:
        inner = _inner_integral_quad(trig, t_prime, zeta, sample, wavepacket, gamma, abs_tol)

    if pol == "R":
        direct = complex(wavepacket(t_prime)) * _ground_entry(mu, zeta, t, sample)
        return complex(direct - gamma * _ground_entry(mu, 0, t - t_prime, sample) * inner)
    if pol == "L":
        return complex(1j * gamma * _ground_entry(mu, 1, t - t_prime, sample) * inner)
    raise ValueError(f"polarization must be 'R' or 'L', got {pol!r}")


# ---------------------------------------------------------------------------
# Overlaps


def o_overlap(pol, zeta, mu, T1, sample, gamma=GAMMA, abs_tol=1e-10):
    """<1_pol | Phi_pol^{(zeta,mu)}> on [0, T1]: the emitted photon against
    the ideal exponential mode, by adaptive quadrature."""
    if T1 <= 0:
        raise ValueError(f"T1 must be positive, got {T1}")
    zeta, mu = _as_spin(zeta), _as_spin(mu)

    def integrand(t):
        return math.sqrt(gamma) * np.exp(-0.5 * gamma * t) * f_coefficient(
            pol, zeta, mu, T1, t, sample, gamma
        )

    pts = oscillation_points(0.0, T1, [0.5 * sample.omega_e, 0.5 * sample.omega_g])
    return complex_quad(integrand, 0.0, T1, abs_tol=abs_tol, points=pts)


def lr_overlap_batch(omega_g, n, omega_e, T1, gamma=GAMMA):
    """All eight O_j^{(zeta,mu)} overlaps in closed form, vectorized.

    ``omega_g``: (N,) sampled ground precession frequencies, ``n``: (N, 3)
    unit axes, ``omega_e`` scalar or (N,).  Returns (N, 2, 2, 2) indexed
    [pol(R=0,L=1), zeta, mu].
    """
    omega_g = np.atleast_1d(np.asarray(omega_g, dtype=float))
    n = np.atleast_2d(np.asarray(n, dtype=float))
    b = 0.5 * omega_g
    a = 0.5 * np.asarray(omega_e, dtype=float)
    nz = n[:, 2]
    nplus = n[:, 0] + 1j * n[:, 1]
    nminus = np.conj(nplus)

    out = np.zeros((omega_g.shape[0], 2, 2, 2), dtype=complex)
    for r in (0, 1):
        for zeta in (0, 1):
            w = (0.5, 0.5) if zeta == r else (-0.5, 0.5)  # cos vs -i sin weights
            for mu in (0, 1):
                coef = _g_coef(mu, r, nz, nplus, nminus)
                acc = np.zeros_like(out[:, 0, 0, 0])
                for rho, c_rho in zip((+1, -1), coef):
                    for tau, w_tau in zip((+1, -1), w):
                        q = -gamma + 1j * (tau * a - rho * b)
                        acc = acc + c_rho * w_tau * np.exp(1j * rho * b * T1) * exp_int(q, T1)
                out[:, r, zeta, mu] = gamma * acc
    return out


def _check_long_time(T_g, big_gamma, gamma):
    for name, rate in (("Gamma", big_gamma), ("gamma", gamma)):
        if math.exp(-0.5 * rate * T_g) >= 1e-6:
            warnings.warn(
                f"exp(-{name}*T_g/2) = {math.exp(-0.5 * rate * T_g):.2e} >= 1e-6: "
                "gate window too short for the long-time overlap convention",
                stacklevel=3,
            )


def cz_lambda_batch(omega_g, n, omega_e, big_gamma, T_g, gamma=GAMMA):
    """Photon overlaps Lambda^{(zeta,mu)} for an exponential input, closed
    form, vectorized over samples.  Returns (N, 2, 2) indexed [zeta, mu]."""
    omega_g = np.atleast_1d(np.asarray(omega_g, dtype=float))
    n = np.atleast_2d(np.asarray(n, dtype=float))
    b = 0.5 * omega_g
    a = 0.5 * np.asarray(omega_e, dtype=float)
    nz = n[:, 2]
    nplus = n[:, 0] + 1j * n[:, 1]
    nminus = np.conj(nplus)

    passthrough = -math.expm1(-big_gamma * T_g)  # 1 - e^{-Gamma T_g}
    out = np.zeros((omega_g.shape[0], 2, 2), dtype=complex)
    for zeta in (0, 1):
        g_sig = _g_coef(0, zeta, nz, nplus, nminus)
        for mu in (0, 1):
            direct_coef = _g_coef(mu, zeta, nz, nplus, nminus)
            acc = np.zeros_like(out[:, 0, 0])
            for rho, c_rho in zip((+1, -1), direct_coef):
                acc = acc + c_rho * np.exp(1j * rho * b * T_g)
            total = passthrough * acc

            h_rho = _g_coef(mu, 0, nz, nplus, nminus)
            acc2 = np.zeros_like(out[:, 0, 0])
            for rho, h in zip((+1, -1), h_rho):
                for tau in (+1, -1):
                    p = -0.5 * (big_gamma + gamma) + 1j * (tau * a - rho * b)
                    for sigma, g in zip((+1, -1), g_sig):
                        z = 0.5 * (gamma - big_gamma) + 1j * (sigma * b - tau * a)
                        acc2 = acc2 + h * 0.5 * g * np.exp(1j * rho * b * T_g) * exp_int2(p, z, T_g)
            out[:, zeta, mu] = total - gamma * big_gamma * acc2
    return out


def lambda_overlap(
    zeta, mu, T_g, sample, wavepacket,
    gamma=GAMMA, method="auto", abs_tol=1e-8,
):
    """Lambda^{(zeta,mu)} = int_0^{T_g} xi*(s) lambda_R^{(zeta,mu)}(T_g, s) ds.

    The "quad" path is the double-nested quadrature reference; "closed"
    is the exact antiderivative path for exponential inputs.
    """
    zeta, mu = _as_spin(zeta), _as_spin(mu)
    if method == "auto":
        method = "closed" if isinstance(wavepacket, ExponentialWavepacket) else "quad"
    big_gamma = getattr(wavepacket, "big_gamma", gamma)
    _check_long_time(T_g, big_gamma, gamma)

    if method == "closed":
        lam = cz_lambda_batch([sample.omega_g], [sample.n], sample.omega_e, big_gamma, T_g, gamma)
        return complex(lam[0, zeta, mu])

    inner_tol = abs_tol * 1e-2

    def integrand(s):
        return np.conj(complex(wavepacket(s))) * lambda_coefficient(
            "R", zeta, mu, T_g, s, sample, wavepacket,
            gamma=gamma, method="quad", abs_tol=inner_tol,
        )

    lo, hi = wavepacket.support()
    hi = min(hi, T_g)
    pts = oscillation_points(lo, hi, [0.5 * sample.omega_e, 0.5 * sample.omega_g])
    return complex_quad(integrand, lo, hi, abs_tol=abs_tol, points=pts, limit=800)
