"""Brute-force discrete collision simulator: the ground truth for the
closed-form amplitude layer.

The propagating field is a conveyor belt of two-mode time bins (R/L
polarization, occupations truncated to {0, 1}); step n applies the
exact collision unitary to emitter x bin_n.  Two representations are
used:

- ``LatticeState``/``evolve``: a generic sparse amplitude map keyed by
  (emitter level, occupied bins).  Exact but O(states) per step; used
  for short validation runs and as the reference for the fast engines.
- Specialized engines for emission, single-photon scattering and the
  cluster chain.  These apply the same collision-unitary sub-blocks,
  exploiting two exact structural facts: excitation number is conserved
  within a collision, and a ground-manifold emitter with no photon in
  the active bin undergoes pure spin precession (so past-bin photon
  amplitudes can be propagated in closed form).  No additional
  approximation beyond the time discretization is introduced.

The only approximation anywhere is the step size; all comparisons
against closed forms must show first-order convergence in delta_t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .kraus import (
    DOWN_E,
    UP_E,
    collision_blocks,
    collision_unitary,
    ground_rotation,
)
from .params import GAMMA, MagneticSample

__all__ = [
    "LatticeState",
    "evolve",
    "EmissionResult",
    "simulate_emission",
    "ScatteringResult",
    "simulate_scattering",
    "LrOracleResult",
    "simulate_lr",
    "emission_discrepancy",
    "scattering_discrepancy",
    "lr_discrepancy",
    "ConvergenceReport",
    "convergence_study",
]

_SWAP = np.zeros((4, 4), dtype=complex)  # energy-manifold population swap
_SWAP[0, 2] = _SWAP[1, 3] = _SWAP[2, 0] = _SWAP[3, 1] = 1.0

_Y_UP = np.array([1.0, 1.0j], dtype=complex) / math.sqrt(2.0)  # spin up_y


# ---------------------------------------------------------------------------
# Generic sparse lattice state


@dataclass
class LatticeState:
    """Sparse wavefunction on emitter x occupied time bins.

    ``amplitudes`` maps (emitter level, bins) to a complex amplitude,
    where bins is a sorted tuple of (bin index, polarization).  ``n_bins``
    counts collisions applied so far (the next active bin index);
    ``leakage`` accumulates probability dropped by the photon-number cap.
    """

    delta_t: float
    amplitudes: dict = field(default_factory=dict)
    n_bins: int = 0
    n_max: int = 2
    leakage: float = 0.0

    @classmethod
    def initial(cls, delta_t, emitter_level, n_max=2):
        return cls(delta_t, {(emitter_level, ()): 1.0 + 0.0j}, 0, n_max)

    def norm(self):
        return math.sqrt(sum(abs(a) ** 2 for a in self.amplitudes.values()))

    def photon_sector(self, n_photons):
        return {
            key: amp for key, amp in self.amplitudes.items() if len(key[1]) == n_photons
        }

    def dump(self, path):
        """Self-describing text dump: header, then rows of (key, re, im)."""
        with open(path, "w") as fh:
            fh.write(f"# lattice-state delta_t={float(self.delta_t)!r} n_bins={self.n_bins} "
                     f"n_max={self.n_max} leakage={float(self.leakage)!r}\n")
            fh.write("# emitter | bin:pol,... | re | im\n")
            for (em, bins), amp in sorted(self.amplitudes.items()):
                bins_txt = ",".join(f"{b}:{p}" for b, p in bins) or "-"
                fh.write(f"{em} {bins_txt} {float(amp.real)!r} {float(amp.imag)!r}\n")

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            header = fh.readline().split()
            meta = dict(item.split("=") for item in header[2:])
            fh.readline()
            amps = {}
            for line in fh:
                em, bins_txt, re, im = line.split()
                bins = ()
                if bins_txt != "-":
                    bins = tuple(
                        (int(b), p) for b, p in (x.split(":") for x in bins_txt.split(","))
                    )
                amps[(int(em), bins)] = float(re) + 1j * float(im)
        return cls(
            float(meta["delta_t"]), amps, int(meta["n_bins"]), int(meta["n_max"]),
            float(meta["leakage"]),
        )


def evolve(state, sample, n_steps, gamma=GAMMA):
    """Apply ``n_steps`` collisions to a LatticeState (generic engine).

    Amplitudes that would exceed the photon-number cap are dropped into
    ``leakage``.  Raises if the norm drifts by more than 1e-8 per 1e4
    steps beyond the recorded leakage.
    """
    u = collision_unitary(state.delta_t, sample, gamma).entries
    amps = dict(state.amplitudes)
    leakage = state.leakage
    norm_in = math.sqrt(sum(abs(a) ** 2 for a in amps.values())) ** 2 + leakage

    for step in range(state.n_bins, state.n_bins + n_steps):
        groups = {}
        for (em, bins), amp in amps.items():
            occ_r = (step, "R") in bins
            occ_l = (step, "L") in bins
            rest = tuple(b for b in bins if b[0] != step)
            vec = groups.get(rest)
            if vec is None:
                vec = groups[rest] = np.zeros(16, dtype=complex)
            vec[em * 4 + occ_r * 2 + occ_l] += amp
        new = {}
        for rest, vec in groups.items():
            out = u @ vec
            n_rest = len(rest)
            for idx in np.nonzero(np.abs(out) > 1e-16)[0]:
                em, rem = divmod(int(idx), 4)
                occ_r, occ_l = divmod(rem, 2)
                if n_rest + occ_r + occ_l > state.n_max:
                    leakage += abs(out[idx]) ** 2
                    continue
                bins = rest
                if occ_r:
                    bins = bins + ((step, "R"),)
                if occ_l:
                    bins = bins + ((step, "L"),)
                key = (em, tuple(sorted(bins)))
                new[key] = new.get(key, 0.0) + out[idx]
        amps = new

    result = LatticeState(state.delta_t, amps, state.n_bins + n_steps, state.n_max, leakage)
    drift = abs(result.norm() ** 2 + leakage - norm_in)
    if drift > 1e-8 * max(n_steps, 1):
        raise RuntimeError(f"norm drift {drift:.3e} over {n_steps} steps")
    return result


# ---------------------------------------------------------------------------
# Fast engines


def _blocks(sample, delta_t, gamma):
    blk = collision_blocks(collision_unitary(delta_t, sample, gamma))
    return {
        "vv": blk[((0, 0), (0, 0))],
        "rv": blk[((1, 0), (0, 0))],
        "lv": blk[((0, 1), (0, 0))],
        "vr": blk[((0, 0), (1, 0))],
        "rr": blk[((1, 0), (1, 0))],
        "lr": blk[((0, 1), (1, 0))],
    }


def _ground_rotations(sample, delta_t, counts):
    """Stack of exact 2x2 ground rotations G(count * delta_t)."""
    taus = np.asarray(counts, dtype=float) * delta_t
    half = 0.5 * sample.omega_g * taus
    c, s = np.cos(half), np.sin(half)
    nx, ny, nz = sample.n
    g = np.empty((len(taus), 2, 2), dtype=complex)
    g[:, 0, 0] = c - 1j * nz * s
    g[:, 0, 1] = -1j * (nx - 1j * ny) * s
    g[:, 1, 0] = -1j * (nx + 1j * ny) * s
    g[:, 1, 1] = c + 1j * nz * s
    return g


@dataclass
class EmissionResult:
    """One-excitation run: per-bin photon amplitudes at the final time.

    ``amps[pol]`` is (2, n_bins): final-spin components per emission bin,
    already precessed to ``t_final``; ``bin_times`` are bin centers.
    ``vacuum`` is the surviving no-photon emitter 4-vector.
    """

    delta_t: float
    t_final: float
    bin_times: np.ndarray
    amps: dict
    vacuum: np.ndarray
    leakage: float

    def norm_sq(self):
        total = float(np.linalg.norm(self.vacuum) ** 2)
        for a in self.amps.values():
            total += float(np.sum(np.abs(a) ** 2))
        return total + self.leakage


def _run_single_excitation(sample, n_steps, delta_t, v0, input_amps=None, gamma=GAMMA):
    b = _blocks(sample, delta_t, gamma)
    v = np.asarray(v0, dtype=complex).copy()
    out_r = np.zeros((4, n_steps), dtype=complex)
    out_l = np.zeros((4, n_steps), dtype=complex)

    if input_amps is None:
        for m in range(n_steps):
            out_r[:, m] = b["rv"] @ v
            out_l[:, m] = b["lv"] @ v
            v = b["vv"] @ v
    else:
        spin0 = np.array([v0[0], v0[1]], dtype=complex)
        rot = _ground_rotations(sample, delta_t, np.arange(n_steps))
        u_in = np.zeros((4, n_steps), dtype=complex)
        u_in[:2, :] = np.einsum("mij,j->im", rot, spin0) * input_amps[None, :]
        v = np.zeros(4, dtype=complex)
        for m in range(n_steps):
            u = u_in[:, m]
            out_r[:, m] = b["rv"] @ v + b["rr"] @ u
            out_l[:, m] = b["lv"] @ v + b["lr"] @ u
            v = b["vv"] @ v + b["vr"] @ u

    # Photons created during step m precess in the ground manifold for the
    # remaining n_steps - m - 1 collisions; apply the exact rotations.
    rot = _ground_rotations(sample, delta_t, n_steps - 1 - np.arange(n_steps))
    amps = {}
    for pol, arr in (("R", out_r), ("L", out_l)):
        amps[pol] = np.einsum("mij,jm->im", rot, arr[:2, :])
    return v, amps


def simulate_emission(sample, t_final, delta_t, zeta="up", gamma=GAMMA):
    """Spontaneous emission from |zeta, e, vacuum>; exact collision steps."""
    n_steps = int(round(t_final / delta_t))
    v0 = np.zeros(4, dtype=complex)
    v0[UP_E if zeta in ("up", 0) else DOWN_E] = 1.0
    vac, amps = _run_single_excitation(sample, n_steps, delta_t, v0, gamma=gamma)
    times = (np.arange(n_steps) + 0.5) * delta_t
    return EmissionResult(delta_t, n_steps * delta_t, times, amps, vac, 0.0)


@dataclass
class ScatteringResult:
    delta_t: float
    t_final: float
    bin_times: np.ndarray
    amps: dict
    vacuum: np.ndarray
    input_amps: np.ndarray
    leakage: float

    def norm_sq(self):
        total = float(np.linalg.norm(self.vacuum) ** 2)
        for a in self.amps.values():
            total += float(np.sum(np.abs(a) ** 2))
        return total + self.leakage


def simulate_scattering(sample, wavepacket, t_final, delta_t, zeta="up", gamma=GAMMA):
    """One R-polarized input photon on |zeta, g>; returns the one-photon
    output amplitudes per bin, precessed to the final time.

    The input is discretized as sqrt(delta_t) xi(bin center) and
    renormalized on the lattice.
    """
    n_steps = int(round(t_final / delta_t))
    times = (np.arange(n_steps) + 0.5) * delta_t
    c = np.sqrt(delta_t) * np.asarray(wavepacket(times), dtype=complex)
    c /= np.linalg.norm(c)
    v0 = np.zeros(4, dtype=complex)
    v0[0 if zeta in ("up", 0) else 1] = 1.0
    vac, amps = _run_single_excitation(sample, n_steps, delta_t, v0, input_amps=c, gamma=gamma)
    return ScatteringResult(delta_t, n_steps * delta_t, times, amps, vac, c, 0.0)


@dataclass
class LrOracleResult:
    """Cluster-chain run: lattice fidelity against the ideal chain state,
    plus per-bin (N=1) or probed pair (N=2) amplitudes for convergence
    checks."""

    delta_t: float
    t_step: float
    n_steps: int
    fidelity: float
    bin_times: np.ndarray
    amps: dict | None
    probe: dict | None
    residual_excited: float
    leakage: float
    norm_sq: float


def _ideal_mode(n_bins, delta_t):
    """Discretized normalized exponential mode on one segment window."""
    t = (np.arange(n_bins) + 0.5) * delta_t
    amp = np.sqrt(delta_t) * np.exp(-0.5 * t)
    return amp / np.linalg.norm(amp)


def simulate_lr(sample, n_steps, delta_t, t_step, gamma=GAMMA,
                excitation_tolerance=0.25, n_probe=12):
    """Run the excite/emit/precess chain for one or two unit steps.

    The re-excitation pulse is an instantaneous population swap between
    the energy manifolds; it refuses to fire when the excited-manifold
    population exceeds ``excitation_tolerance`` (the pulse is defined on
    a ground-manifold emitter; physical runs keep the residual trion
    population at the e^{-gamma t_step} level).
    """
    if n_steps not in (1, 2):
        raise ValueError("n_steps must be 1 or 2")
    n1 = int(round(t_step / delta_t))
    b = _blocks(sample, delta_t, gamma)

    v = np.zeros(4, dtype=complex)
    v[2:] = _Y_UP  # prepared in up_y, then instantaneously excited
    rows = {"R": np.zeros((n1, 4), dtype=complex), "L": np.zeros((n1, 4), dtype=complex)}
    for m in range(n1):
        rows["R"][m] = b["rv"] @ v
        rows["L"][m] = b["lv"] @ v
        v = b["vv"] @ v

    # Precess segment-1 photon rows (ground manifold) to the segment end.
    rot = _ground_rotations(sample, delta_t, n1 - 1 - np.arange(n1))
    for pol in ("R", "L"):
        rows[pol][:, :2] = np.einsum("mij,mj->mi", rot, rows[pol][:, :2])

    times1 = (np.arange(n1) + 0.5) * delta_t
    ideal1 = _ideal_mode(n1, delta_t)

    if n_steps == 1:
        # <Psi_1|Psi(T1)>: ideal spin branches down_y with R, up_y with L.
        bra_spin = {
            "R": np.conj(np.array([1.0, -1.0j]) / math.sqrt(2.0)),
            "L": np.conj(_Y_UP),
        }
        overlap = 0.0 + 0.0j
        for pol in ("R", "L"):
            overlap += (np.conj(ideal1) @ rows[pol][:, :2]) @ bra_spin[pol] / math.sqrt(2.0)
        amps = {pol: rows[pol][:, :2].T.copy() for pol in ("R", "L")}
        residual = float(np.linalg.norm(v) ** 2)
        norm_sq = residual + sum(float(np.sum(np.abs(a) ** 2)) for a in amps.values())
        return LrOracleResult(
            delta_t, n1 * delta_t, 1, abs(overlap) ** 2, times1, amps, None,
            residual, 0.0, norm_sq,
        )

    # Re-excitation between the segments: population swap g <-> e.
    excited_pop = float(np.linalg.norm(v[2:]) ** 2)
    for pol in ("R", "L"):
        excited_pop += float(np.sum(np.abs(rows[pol][:, 2:]) ** 2))
    if excited_pop > excitation_tolerance:
        raise ValueError(
            f"re-excitation pulse on excited-manifold population {excited_pop:.3f} "
            f"(> {excitation_tolerance}); the swap targets a ground-manifold emitter"
        )
    v = _SWAP @ v
    for pol in ("R", "L"):
        rows[pol] = rows[pol] @ _SWAP.T

    # Segment 2: each first-photon row radiates again; accumulate the
    # two-photon overlap against the ideal chain state and probe pairs.
    ideal2 = _ideal_mode(n1, delta_t)
    # Ideal spin bra per (j1, j2) branch with sign, from the two-step chain.
    y_down = np.array([1.0, -1.0j]) / math.sqrt(2.0)
    branches = {
        ("R", "R"): (0.5, np.conj(y_down)),
        ("L", "R"): (0.5, np.conj(y_down)),
        ("R", "L"): (-0.5, np.conj(_Y_UP)),
        ("L", "L"): (0.5, np.conj(_Y_UP)),
    }
    probe_m = np.unique(np.linspace(0, n1 - 1, n_probe, dtype=int))
    probe_n = np.unique(np.linspace(0, n1 - 1, n_probe, dtype=int))
    probe = {
        (j1, j2): np.zeros((len(probe_m), len(probe_n), 2), dtype=complex)
        for j1 in ("R", "L") for j2 in ("R", "L")
    }
    probe_col = {int(n): i for i, n in enumerate(probe_n)}

    overlap = 0.0 + 0.0j
    two_photon_norm = 0.0
    single_seg2_norm = 0.0
    for n in range(n1):
        g_fin = ground_rotation((n1 - 1 - n) * delta_t, sample)
        w_res = {"R": b["rv"] @ v, "L": b["lv"] @ v}
        v = b["vv"] @ v
        single_seg2_norm += sum(float(np.linalg.norm(w) ** 2) for w in w_res.values())
        for j1 in ("R", "L"):
            for j2, blk_key in (("R", "rv"), ("L", "lv")):
                w2 = rows[j1] @ b[blk_key].T  # (n1, 4); ground rows only
                two_photon_norm += float(np.sum(np.abs(w2) ** 2))
                x = np.conj(ideal1) @ w2[:, :2]  # ideal-weighted first photon
                sgn, bra = branches[(j1, j2)]
                overlap += sgn * np.conj(ideal2[n]) * (bra @ (g_fin @ x))
                if n in probe_col:
                    fin = np.einsum("ij,mj->mi", g_fin, w2[probe_m, :2])
                    probe[(j1, j2)][:, probe_col[n], :] = fin
            rows[j1] = rows[j1] @ b["vv"].T

    residual = float(np.linalg.norm(v) ** 2)
    rows_norm = sum(float(np.sum(np.abs(rows[p]) ** 2)) for p in ("R", "L"))
    norm_sq = residual + rows_norm + two_photon_norm + single_seg2_norm
    return LrOracleResult(
        delta_t, n1 * delta_t, 2, abs(overlap) ** 2, times1, None,
        {"pairs": probe, "m_indices": probe_m, "n_indices": probe_n},
        residual, 0.0, norm_sq,
    )


# ---------------------------------------------------------------------------
# Discrepancy runners against the closed-form amplitude layer


def emission_discrepancy(sample, t_final, delta_t, gamma=GAMMA):
    """Max bin-wise |oracle - analytic| over all emission amplitudes."""
    from .amplitudes import f_coefficient

    res = simulate_emission(sample, t_final, delta_t, gamma=gamma)
    scale = 1.0 / math.sqrt(delta_t)
    worst = 0.0
    for pol in ("R", "L"):
        for mu in (0, 1):
            analytic = f_coefficient(pol, 0, mu, res.t_final, res.bin_times, sample, gamma)
            worst = max(worst, float(np.max(np.abs(res.amps[pol][mu] * scale - analytic))))
    return worst


def scattering_discrepancy(sample, wavepacket, t_final, delta_t, n_probe=40, gamma=GAMMA):
    """Max |oracle - analytic| over a probe grid of output bins."""
    from .amplitudes import lambda_coefficient

    res = simulate_scattering(sample, wavepacket, t_final, delta_t, gamma=gamma)
    idx = np.unique(np.linspace(0, len(res.bin_times) - 1, n_probe, dtype=int))
    scale = 1.0 / math.sqrt(delta_t)
    worst = 0.0
    for pol in ("R", "L"):
        for mu in (0, 1):
            analytic = np.array([
                lambda_coefficient(pol, 0, mu, res.t_final, float(res.bin_times[i]),
                                   sample, wavepacket, gamma=gamma)
                for i in idx
            ])
            got = res.amps[pol][mu][idx] * scale
            worst = max(worst, float(np.max(np.abs(got - analytic))))
    return worst


def lr_discrepancy(sample, n_steps, delta_t, t_step, gamma=GAMMA):
    """Max |oracle - analytic| over single-bin (N=1) or probed two-photon
    pair (N=2) amplitudes of the cluster chain."""
    from .amplitudes import f_coefficient

    res = simulate_lr(sample, n_steps, delta_t, t_step, gamma=gamma)
    t_eff = res.t_step
    sqrt2 = math.sqrt(2.0)
    if n_steps == 1:
        scale = 1.0 / math.sqrt(delta_t)
        worst = 0.0
        for pol in ("R", "L"):
            for mu in (0, 1):
                analytic = (
                    f_coefficient(pol, 0, mu, t_eff, res.bin_times, sample, gamma)
                    + 1j * f_coefficient(pol, 1, mu, t_eff, res.bin_times, sample, gamma)
                ) / sqrt2
                got = res.amps[pol][mu] * scale
                worst = max(worst, float(np.max(np.abs(got - analytic))))
        return worst

    pm, pn = res.probe["m_indices"], res.probe["n_indices"]
    tm = (pm + 0.5) * delta_t
    tn = (pn + 0.5) * delta_t
    worst = 0.0
    for j1 in ("R", "L"):
        first = {
            mu: (
                f_coefficient(j1, 0, mu, t_eff, tm, sample, gamma)
                + 1j * f_coefficient(j1, 1, mu, t_eff, tm, sample, gamma)
            ) / sqrt2
            for mu in (0, 1)
        }
        for j2 in ("R", "L"):
            analytic = np.zeros((len(pm), len(pn), 2), dtype=complex)
            for mu in (0, 1):
                second = {nu: f_coefficient(j2, mu, nu, t_eff, tn, sample, gamma) for nu in (0, 1)}
                for nu in (0, 1):
                    analytic[:, :, nu] += first[mu][:, None] * second[nu][None, :]
            got = res.probe["pairs"][(j1, j2)] / delta_t
            worst = max(worst, float(np.max(np.abs(got - analytic))))
    return worst


# ---------------------------------------------------------------------------
# Convergence studies


@dataclass
class ConvergenceReport:
    delta_ts: np.ndarray
    errors: np.ndarray
    order: float | None
    pair_orders: np.ndarray
    monotone: bool
    flagged: bool

    def __str__(self):
        rows = "\n".join(
            f"  dt={dt:.2e}  err={err:.4e}" for dt, err in zip(self.delta_ts, self.errors)
        )
        order = "undefined" if self.order is None else f"{self.order:.3f}"
        return f"{rows}\n  fitted order: {order} (monotone={self.monotone})"


def convergence_study(runner, delta_ts):
    """Estimate the convergence order of ``runner(delta_t) -> error``.

    Needs at least 3 step sizes in geometric progression.  A flat error
    sequence leaves the order undefined; non-monotone sequences are
    flagged but still fitted.
    """
    delta_ts = np.asarray(sorted(delta_ts, reverse=True), dtype=float)
    if len(delta_ts) < 3:
        raise ValueError("need at least 3 delta_t values")
    ratios = delta_ts[:-1] / delta_ts[1:]
    if np.any(np.abs(ratios - ratios[0]) > 1e-6 * ratios[0]):
        raise ValueError("delta_t values must form a geometric progression")

    errors = np.array([runner(dt) for dt in delta_ts], dtype=float)
    monotone = bool(np.all(np.diff(errors) < 0))
    spread = errors.max() - errors.min()
    if errors.max() < 1e-14 or spread < 1e-3 * errors.max():
        return ConvergenceReport(delta_ts, errors, None, np.array([]), monotone, True)

    logs_dt = np.log(delta_ts)
    logs_err = np.log(errors)
    order = float(np.polyfit(logs_dt, logs_err, 1)[0])
    pair_orders = np.diff(logs_err) / np.diff(logs_dt)
    return ConvergenceReport(delta_ts, errors, order, pair_orders, monotone, not monotone)
