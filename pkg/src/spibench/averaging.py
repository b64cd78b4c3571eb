"""Gaussian averaging over frozen Overhauser configurations.

Canonical scheme: 3-d Cartesian Gauss-Hermite tensor quadrature, which
handles a nonzero external-field offset naturally.  Monte Carlo with a
counter-based seeded generator is the cross-validation fallback.  The
radial/angular parameterization is implemented only for the zero-offset
spin-polarization reference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.hermite import hermgauss
from scipy.special import roots_genlaguerre, roots_legendre

from .params import MagneticSample, OverhauserDistribution, sample_overhauser_draws

__all__ = [
    "GaussHermiteSpec",
    "MonteCarloSpec",
    "AverageSpec",
    "average_nodes",
    "gaussian_average",
    "merkulov_sz",
    "sz_single_sample",
    "merkulov_radial_quadrature",
]


@dataclass(frozen=True)
class GaussHermiteSpec:
    """Deterministic tensor-product quadrature, ``nodes`` per axis (odd)."""

    nodes: int = 15

    def __post_init__(self):
        if not 5 <= self.nodes <= 51 or self.nodes % 2 == 0:
            raise ValueError(f"nodes per axis must be odd in [5, 51], got {self.nodes}")


@dataclass(frozen=True)
class MonteCarloSpec:
    """Seeded Monte Carlo; the seed is required for reproducibility."""

    n_samples: int
    seed: int

    def __post_init__(self):
        if self.n_samples < 100:
            raise ValueError(f"n_samples must be >= 100, got {self.n_samples}")


AverageSpec = GaussHermiteSpec | MonteCarloSpec


def _gh_axes(nodes, w):
    # Physical variable per axis: x = sqrt(2) w r with weight e^{-r^2}/sqrt(pi).
    r, wt = hermgauss(nodes)
    return math.sqrt(2.0) * w * r, wt / math.sqrt(math.pi)


def _gh_nodes(dist, nodes):
    """Tensor grid of Overhauser vectors (external included) and weights."""
    x, wx = _gh_axes(nodes, dist.w)
    gx, gy, gz = np.meshgrid(x, x, x, indexing="ij")
    wts = (wx[:, None, None] * wx[None, :, None] * wx[None, None, :]).ravel()
    vecs = np.stack([gx.ravel(), gy.ravel(), gz.ravel()], axis=1) + dist.external_vec
    return vecs, wts


def average_nodes(dist, spec, omega_e=0.0):
    """Evaluation nodes for an Overhauser average.

    Returns (total field vectors (N, 3), weights (N,)).  Weights sum to 1
    for quadrature and are uniform 1/N for Monte Carlo.  A zero-width
    distribution collapses to the single external-field node.
    """
    if dist.w == 0.0:
        return dist.external_vec[None, :], np.array([1.0])
    if isinstance(spec, GaussHermiteSpec):
        return _gh_nodes(dist, spec.nodes)
    if isinstance(spec, MonteCarloSpec):
        draws = sample_overhauser_draws(dist, spec.seed, spec.n_samples)
        vecs = draws + dist.external_vec
        return vecs, np.full(spec.n_samples, 1.0 / spec.n_samples)
    raise TypeError(f"unsupported average spec {spec!r}")


def gaussian_average(fn, dist, spec, omega_e=0.0):
    """Average fn(MagneticSample) -> real over the noise distribution.

    Quadrature mode estimates the error by node-count refinement (the
    same integral at a coarser grid); Monte Carlo returns the standard
    error of the mean.  Non-finite fn values raise immediately with the
    offending sample.
    """
    vecs, wts = average_nodes(dist, spec, omega_e)
    values = _evaluate(fn, vecs, omega_e)
    mean = float(np.sum(values * wts))

    if dist.w == 0.0:
        return mean, 0.0
    if isinstance(spec, MonteCarloSpec):
        stderr = float(np.std(values, ddof=1) / math.sqrt(len(values)))
        return mean, stderr
    coarse = spec.nodes - 4  # odd stays odd
    if coarse < 5:
        return mean, 0.0
    vecs_c, wts_c = _gh_nodes(dist, coarse)
    mean_c = float(np.sum(_evaluate(fn, vecs_c, omega_e) * wts_c))
    return mean, abs(mean - mean_c)


def _evaluate(fn, vecs, omega_e):
    values = np.empty(len(vecs))
    for i, v in enumerate(vecs):
        omega_g = float(np.linalg.norm(v))
        if omega_g == 0.0:
            sample = MagneticSample(0.0, omega_e, degenerate=True)
        else:
            sample = MagneticSample(omega_g, omega_e, tuple(v / omega_g))
        out = fn(sample)
        if not np.isfinite(out):
            raise ValueError(f"integrand returned non-finite value {out} at sample {sample}")
        values[i] = out
    return values


def sz_single_sample(t, sample):
    """Electron polarization <s_z>(t) for one frozen field, spin starting up:
    cos^2(omega_g t/2) + sin^2(omega_g t/2) cos(2 theta)."""
    half = 0.5 * sample.omega_g * t
    cos2theta = 2.0 * sample.n_z**2 - 1.0
    return math.cos(half) ** 2 + math.sin(half) ** 2 * cos2theta


def merkulov_sz(t, w):
    """Frozen-field averaged polarization (1/3)(1 + 2 e^{-w^2 t^2/2}(1 - t^2 w^2));
    decays to the 1/3 plateau for t >> 1/w."""
    if t < 0 or w < 0:
        raise ValueError("t and w must be nonnegative")
    x = (w * t) ** 2
    return (1.0 + 2.0 * math.exp(-0.5 * x) * (1.0 - x)) / 3.0


def merkulov_radial_quadrature(t, w, n_radial=80, n_theta=80, n_phi=8):
    """Zero-offset average of sz_single_sample in radial/angular coordinates.

    Radial measure Omega^2 e^{-Omega^2/2w^2}: generalized Gauss-Laguerre
    (alpha = 1/2) after Omega = w sqrt(2 x); polar angle by Gauss-Legendre
    in cos(theta); the integrand is phi-independent but the phi loop is
    kept to mirror the three-fold integral.
    """
    x, wx = roots_genlaguerre(n_radial, 0.5)
    u, wu = roots_legendre(n_theta)  # u = cos(theta) on [-1, 1]
    omega = w * np.sqrt(2.0 * x)

    # Normalization: int x^{1/2} e^{-x} dx = Gamma(3/2) = sqrt(pi)/2 per radial
    # unit; angular measure 1/2 per u; phi uniform.
    radial_w = wx / (math.sqrt(math.pi) / 2.0)
    ang_w = wu / 2.0

    half = 0.5 * omega[:, None] * t
    cos2theta = 2.0 * u[None, :] ** 2 - 1.0
    values = np.cos(half) ** 2 + np.sin(half) ** 2 * cos2theta
    per_phi = radial_w @ values @ ang_w
    return float(np.mean(np.full(n_phi, per_phi)))
