#!/usr/bin/env python3
"""Quick-look plots from the CSV outputs of the committed recipes.

Usage: python scripts/plot_results.py <results_dir>
Writes PNGs next to the CSVs.  Plotting only; all numbers come from the
CSV files.
"""

import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def plot_phase_diagram(results):
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for stem, label in [("phase_diagram_ideal", "ideal"),
                        ("phase_diagram_dq8", "dq = pi/8"),
                        ("phase_diagram_dq16", "dq = pi/16"),
                        ("phase_diagram_dq1024", "dq = pi/1024")]:
        path = os.path.join(results, stem + ".csv")
        if not os.path.exists(path):
            continue
        data = np.loadtxt(path, delimiter=",", skiprows=1)
        ax.plot(data[:, 0], data[:, 1], marker="o", ms=3, label=label)
    ax.set_xlabel("coupling offset")
    ax.set_ylabel("Q")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(os.path.join(results, "phase_diagram.png"), dpi=150)


def plot_bands(results):
    fig, axes = plt.subplots(1, 3, figsize=(9, 3), sharey=True)
    for ax, lam in zip(axes, (0, 1, 2)):
        path = os.path.join(results, f"bands_offset{lam}.csv")
        if not os.path.exists(path):
            continue
        data = np.loadtxt(path, delimiter=",", skiprows=1)
        for c in (1, 2, 3):
            ax.plot(data[:, 0], data[:, c], lw=1)
        ax.set_title(f"offset {lam}")
        ax.set_xlabel("kx")
    axes[0].set_ylabel("E (units of half drive)")
    fig.tight_layout()
    fig.savefig(os.path.join(results, "bands.png"), dpi=150)


def plot_metric_map(results):
    path = os.path.join(results, "metric_map_dq16.csv")
    if not os.path.exists(path):
        return
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    n = int(round(np.sqrt(data.shape[0])))
    fig, axes = plt.subplots(2, 3, figsize=(9, 5))
    names = ["g_t1t1", "g_t2t2", "g_pp", "g_t1t2", "g_t1p", "g_t2p"]
    for ax, col, name in zip(axes.ravel(), range(2, 8), names):
        im = ax.imshow(data[:, col].reshape(n, n).T, origin="lower",
                       extent=[0, np.pi, 0, np.pi], aspect="auto")
        ax.set_title(name, fontsize=9)
        fig.colorbar(im, ax=ax)
    fig.tight_layout()
    fig.savefig(os.path.join(results, "metric_map.png"), dpi=150)


if __name__ == "__main__":
    results = sys.argv[1] if len(sys.argv) > 1 else "results"
    plot_phase_diagram(results)
    plot_bands(results)
    plot_metric_map(results)
    print("plots written to", results)
