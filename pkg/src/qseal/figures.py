"""Figure rendering for the report paths (bounds sweeps, attack convergence).

Every renderer writes a PNG next to the delimited data it accompanies and
returns the path.  Headless backend; nothing here opens a window.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def render_psi_bound_sweep(rows, path, epsilon_i: float | None = None,
                           n_min: int | None = None) -> str:
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ns = [r["n"] for r in rows]
    psi = [r["psi_info_bound"] for r in rows]
    ax.semilogy(ns, psi, lw=1.4, label="message-information bound")
    if epsilon_i is not None:
        ax.axhline(epsilon_i, color="crimson", ls="--", lw=1, label=f"target {epsilon_i:g}")
    if n_min is not None:
        ax.axvline(n_min, color="gray", ls=":", lw=1, label=f"minimal n = {n_min}")
    ax.set_xlabel("codeword length n")
    ax.set_ylabel("information bound (log scale)")
    ax.legend(frameon=False, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def render_leak_bound_sweep(rows, path, t: int) -> str:
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    a = [r["a"] for r in rows]
    ax.plot(a, [r["tight"] for r in rows], lw=1.4, label="tight bound")
    ax.plot(a, [r["loose"] for r in rows], lw=1.2, ls="--", label="loose H(a) + t(1-a)")
    ax.set_xlabel("pass weight a")
    ax.set_ylabel("location leak bound (bits)")
    ax.set_title(f"t = {t} decoys", fontsize=10)
    ax.legend(frameon=False, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def render_attack_convergence(history, path, exact: float | None = None) -> str:
    """Cumulative detection rate per trial, with the exact rate if known."""
    flags = np.asarray(history, dtype=float)
    trials = np.arange(1, len(flags) + 1)
    running = np.cumsum(flags) / trials
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot(trials, running, lw=1.0, label="running detection rate")
    if exact is not None:
        ax.axhline(exact, color="crimson", ls="--", lw=1, label=f"exact {exact:.6f}")
    ax.set_xlabel("trial")
    ax.set_ylabel("detection rate")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(frameon=False, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)
