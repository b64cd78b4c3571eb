"""Physical parameters, unit conventions and Overhauser-field sampling.

Everything is expressed in units of the spontaneous emission rate gamma
(gamma = 1 internally): frequencies in gamma, times in 1/gamma.  The
quantization axis is z; the external magnetic field lies along x (Voigt
geometry), so the nominal ground-state precession axis is x-hat.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "GAMMA",
    "X_HAT",
    "PhysicalConfig",
    "MagneticSample",
    "BlochQubit",
    "OverhauserDistribution",
    "sample_magnetic",
    "sample_overhauser_draws",
]

# Reference unit: all other rates are dimensionless multiples of this.
GAMMA = 1.0

X_HAT = (1.0, 0.0, 0.0)

_UNIT_TOL = 1e-12

# Stride between per-index Philox substreams; generous so that the
# variable draw count of the ziggurat sampler can never overlap streams.
_PHILOX_STRIDE = 1 << 16


@dataclass(frozen=True)
class PhysicalConfig:
    """One operating point of the interface, all rates in units of gamma.

    ``omega_g_bar`` is the nominal (external-field only) ground precession
    frequency; when ``k_ratio`` is given the consistency relation
    ``omega_g_bar = k_ratio * omega_e`` is enforced.  ``big_gamma`` is the
    input-photon bandwidth, used by the photon-photon gate only.
    """

    omega_e: float
    omega_g_bar: float | None = None
    k_ratio: float | None = None
    w: float = 0.0
    big_gamma: float | None = None
    gamma: float = GAMMA

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        for name in ("omega_e", "w"):
            value = getattr(self, name)
            if value < 0:
                raise ValueError(f"{name} must be nonnegative, got {value}")
        if self.big_gamma is not None and self.big_gamma < 0:
            raise ValueError(f"big_gamma must be nonnegative, got {self.big_gamma}")
        if self.k_ratio is not None:
            if self.k_ratio <= 0:
                raise ValueError(f"k_ratio must be positive, got {self.k_ratio}")
            derived = self.k_ratio * self.omega_e
            if self.omega_g_bar is None:
                object.__setattr__(self, "omega_g_bar", derived)
            elif not math.isclose(self.omega_g_bar, derived, rel_tol=1e-9, abs_tol=1e-12):
                raise ValueError(
                    f"omega_g_bar={self.omega_g_bar} inconsistent with "
                    f"k_ratio*omega_e={derived}"
                )
        if self.omega_g_bar is None:
            raise ValueError("either omega_g_bar or k_ratio must be supplied")
        if self.omega_g_bar < 0:
            raise ValueError(f"omega_g_bar must be nonnegative, got {self.omega_g_bar}")


@dataclass(frozen=True)
class MagneticSample:
    """One frozen configuration of precession frequencies and axis.

    ``n`` is the unit vector of the total ground-state field (external
    plus Overhauser draw); ``degenerate`` marks the zero-field sample for
    which the axis is an arbitrary default (x-hat).
    """

    omega_g: float
    omega_e: float
    n: tuple[float, float, float] = X_HAT
    degenerate: bool = False

    def __post_init__(self):
        if self.omega_g < 0 or self.omega_e < 0:
            raise ValueError("precession frequencies must be nonnegative")
        norm = math.sqrt(sum(c * c for c in self.n))
        if abs(norm - 1.0) > _UNIT_TOL:
            raise ValueError(f"n must be a unit vector, |n| = {norm}")

    @classmethod
    def from_angles(cls, omega_g, omega_e, theta, phi=0.0):
        n = (
            math.sin(theta) * math.cos(phi),
            math.sin(theta) * math.sin(phi),
            math.cos(theta),
        )
        # Renormalize to soak up rounding in the trig evaluation.
        norm = math.sqrt(sum(c * c for c in n))
        return cls(omega_g, omega_e, tuple(c / norm for c in n))

    @property
    def n_vec(self):
        return np.asarray(self.n, dtype=float)

    @property
    def n_z(self):
        return self.n[2]

    @property
    def n_plus(self):
        """n_x + i n_y, the spin-lowering matrix element of n.sigma."""
        return self.n[0] + 1j * self.n[1]

    @property
    def n_minus(self):
        return self.n[0] - 1j * self.n[1]

    @property
    def theta(self):
        return math.acos(max(-1.0, min(1.0, self.n[2])))

    @property
    def phi(self):
        return math.atan2(self.n[1], self.n[0])


@dataclass(frozen=True)
class BlochQubit:
    """Normalized amplitude pair (alpha, beta) of a logical qubit."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm - 1.0) > _UNIT_TOL:
            raise ValueError(f"|alpha|^2 + |beta|^2 = {norm}, must be 1")

    @classmethod
    def from_angles(cls, theta, phi=0.0):
        return cls(math.cos(theta / 2), complex(math.sin(theta / 2)) * np.exp(1j * phi))


@dataclass(frozen=True)
class OverhauserDistribution:
    """Isotropic Gaussian nuclear-field noise plus a fixed external offset.

    ``w`` is the per-component standard deviation of the precession
    contribution; ``external`` is the external-field precession vector
    (both in units of gamma).
    """

    w: float
    external: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if self.w < 0:
            raise ValueError(f"w must be nonnegative, got {self.w}")

    @property
    def external_vec(self):
        return np.asarray(self.external, dtype=float)


def _philox_generator(seed, index=0):
    bg = np.random.Philox(key=np.uint64(seed))
    if index:
        bg = bg.advance(index * _PHILOX_STRIDE)
    return np.random.Generator(bg)


def sample_overhauser_draws(dist, seed, n_samples):
    """Draw ``n_samples`` Overhauser vectors, shape (n_samples, 3).

    Counter-based (Philox) so the whole batch is a pure function of the
    seed; draws do not include the external offset.
    """
    gen = _philox_generator(seed)
    return dist.w * gen.standard_normal((int(n_samples), 3))


def sample_magnetic(dist, rng_seed=None, draw=None, index=0, omega_e=0.0):
    """Produce one frozen MagneticSample from the noise distribution.

    Either ``rng_seed`` (with optional substream ``index``) or an explicit
    3-vector ``draw`` must be given.  ``omega_g`` is the norm of
    external + draw and ``n`` the normalized sum; a zero total field is
    returned flagged degenerate with n = x-hat rather than rejected.
    """
    if (rng_seed is None) == (draw is None):
        raise ValueError("exactly one of rng_seed and draw must be given")
    if draw is None:
        draw = dist.w * _philox_generator(rng_seed, index).standard_normal(3)
    total = dist.external_vec + np.asarray(draw, dtype=float)
    omega_g = float(np.linalg.norm(total))
    if omega_g == 0.0:
        return MagneticSample(0.0, omega_e, X_HAT, degenerate=True)
    n = total / omega_g
    return MagneticSample(omega_g, omega_e, tuple(n))
