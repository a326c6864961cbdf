"""Matplotlib renderers for the run CSV tables.

Each function takes the in-memory rows that were just written to CSV and
renders a PNG next to the delimited output. All figures use the Agg backend
so runs work headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

DPI = 150


def plot_trajectory(data, dim, path):
    """Population time traces and thermal distance on a log axis."""
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(6.0, 6.0), sharex=True)
    t = data[:, 0]
    for i in range(dim):
        (line,) = ax1.plot(t, data[:, 1 + i], label=f"$p_{{{i + 1}}}$")
        ax1.axhline(
            data[0, dim + 3 + i], color=line.get_color(), ls="--", lw=0.8
        )
    ax1.set_ylabel("eigenstate populations")
    ax1.legend(ncol=2, fontsize=8)
    ax2.semilogy(t, np.maximum(data[:, dim + 1], 1e-16), color="k")
    ax2.set_xlabel("t")
    ax2.set_ylabel("trace distance to Gibbs")
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)


def _grid_image(rows, xi, yi, vi):
    xs = sorted({r[xi] for r in rows})
    ys = sorted({r[yi] for r in rows})
    img = np.full((len(ys), len(xs)), np.nan)
    for r in rows:
        if r[vi] is not None:
            img[ys.index(r[yi]), xs.index(r[xi])] = r[vi]
    return xs, ys, img


def plot_sweep_grid(rows, bath_mode, path):
    """Heat map of log10 steady-state distance over the swept grid."""
    xs, ys, img = _grid_image(rows, 0, 1, 3)
    fig, ax = plt.subplots(figsize=(5.5, 4.5))
    im = ax.imshow(
        img,
        origin="lower",
        aspect="auto",
        extent=(min(xs), max(xs), min(ys), max(ys)),
        cmap="viridis",
    )
    if bath_mode:
        ax.set_xlabel(r"$\Gamma$")
        ax.set_ylabel(r"$\beta$")
    else:
        ax.set_xlabel("A")
        ax.set_ylabel("B")
    fig.colorbar(im, ax=ax, label=r"$\log_{10}$ distance to Gibbs")
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)


def plot_chain_scaling(rows, path):
    """Distance to Gibbs versus chain length, one line per beta."""
    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    betas = sorted({r[1] for r in rows})
    for beta in betas:
        pts = [(r[0], r[2]) for r in rows if r[1] == beta and r[2] is not None]
        if pts:
            ls, ds = zip(*pts)
            ax.semilogy(ls, ds, "o-", label=rf"$\beta={beta:g}$")
    ax.set_xlabel("chain length L")
    ax.set_ylabel("trace distance to Gibbs")
    ax.set_xticks(sorted({r[0] for r in rows}))
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)


def plot_rates(rows, betas, path):
    """Spectral density and detailed-balance violation versus frequency."""
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(6.0, 6.0), sharex=True)
    data = np.array(
        [[v if v is not None else np.nan for v in r] for r in rows],
        dtype=float,
    )
    w = data[:, 0]
    for k, beta in enumerate(betas):
        base = 1 + 4 * k
        ax1.semilogy(w, data[:, base], label=rf"$\beta={beta:g}$")
        ax2.semilogy(w, data[:, base + 2], label=rf"$\beta={beta:g}$")
    ax1.set_ylabel(r"$\lambda(\omega)$")
    ax1.legend()
    ax2.set_xlabel(r"$\omega$")
    ax2.set_ylabel("detailed-balance violation")
    ax2.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)


def plot_oracle(rows, g_values, path):
    """Joint-versus-reduced deviation curves, one per coupling strength."""
    data = np.array(rows, dtype=float)
    fig, ax = plt.subplots(figsize=(5.5, 4.0))
    for k, g in enumerate(g_values):
        ax.plot(data[:, 0], data[:, 1 + k], label=f"$g={g:g}$")
    ax.set_xlabel("t")
    ax.set_ylabel("trace distance, joint marginal vs reduced")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
