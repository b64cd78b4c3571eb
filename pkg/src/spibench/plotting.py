"""Figure rendering for the sweep and oracle-check commands.

Every report path can emit a matplotlib figure next to the delimited
output; rendering is headless (Agg) and file-based only.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["render_sweep", "render_merkulov", "render_convergence"]


def render_sweep(x, y, err, path, xlabel, ylabel, title, logx=True):
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if err is not None and np.any(np.asarray(err) > 0):
        ax.errorbar(x, y, yerr=err, fmt="o-", ms=3.5, lw=1.2, capsize=2)
    else:
        ax.plot(x, y, "o-", ms=3.5, lw=1.2)
    if logx:
        ax.set_xscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_merkulov(t, closed, quad, mc, path):
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(t, closed, "-", lw=1.5, label="closed form")
    ax.plot(t, quad, "s", ms=4, mfc="none", label="quadrature")
    if mc is not None:
        ax.plot(t, mc, "x", ms=4, label="Monte Carlo")
    ax.axhline(1.0 / 3.0, color="gray", ls=":", lw=1, label="1/3 plateau")
    ax.set_xlabel(r"$t\,\gamma$")
    ax.set_ylabel(r"$\overline{\langle s_z \rangle}$")
    ax.set_title("Frozen-field spin polarization")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_convergence(delta_ts, errors, order, path, title):
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.loglog(delta_ts, errors, "o-", lw=1.2, label="max discrepancy")
    ref = errors[0] * np.asarray(delta_ts) / delta_ts[0]
    ax.loglog(delta_ts, ref, "--", color="gray", lw=1, label="first order")
    order_txt = "n/a" if order is None else f"{order:.2f}"
    ax.set_xlabel(r"$\gamma\,\Delta t$")
    ax.set_ylabel("max amplitude discrepancy")
    ax.set_title(f"{title} (fitted order {order_txt})")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
