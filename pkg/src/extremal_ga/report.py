"""CSV tables and matplotlib figures for runs and benchmarks."""

from __future__ import annotations

import csv
import os
from typing import Iterable, Mapping, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def write_csv(path: str, columns: Sequence[str], rows: Iterable[Mapping]) -> str:
    """Write rows with exactly ``columns``, in that order."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=list(columns), extrasaction="raise", lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({c: row[c] for c in columns})
    return path


def _save(fig, path):
    # fixed metadata keeps repeated renders byte-identical
    fig.savefig(path, dpi=100, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_convergence(histories: Sequence[Sequence], path: str, title: str = "", optimum=None) -> str:
    """Best-so-far fitness per generation, one line per run."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for h in histories:
        ax.plot(range(len(h)), [float(v) for v in h], lw=1, alpha=0.7)
    if optimum is not None:
        ax.axhline(float(optimum), color="k", ls="--", lw=1, label="known optimum")
        ax.legend(loc="lower right")
    ax.set_xlabel("generation")
    ax.set_ylabel("best fitness")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    return _save(fig, path)


def plot_success(batch_rows: Sequence[Mapping], path: str, title: str = "") -> str:
    """Bar chart of amortized success per order."""
    ns = [str(r["n"]) for r in batch_rows]
    vals = [0.0 if r["amortized_success"] == "NA" else float(r["amortized_success"]) for r in batch_rows]
    fig, ax = plt.subplots(figsize=(4, 3))
    ax.bar(ns, vals, color="tab:blue")
    ax.set_ylim(0, 1.05)
    ax.set_xlabel("n")
    ax.set_ylabel("amortized success")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    return _save(fig, path)


def plot_ablation(cells: Sequence[Mapping], path: str) -> str:
    """One heatmap per generator: selection (rows) x crossover (columns) amortized success."""
    gens = list(dict.fromkeys(c["generator"] for c in cells))
    sels = list(dict.fromkeys(c["selection"] for c in cells))
    cxs = list(dict.fromkeys(c["crossover"] for c in cells))
    fig, axes = plt.subplots(1, len(gens), figsize=(3.2 * len(gens) + 1, 3.4), squeeze=False)
    im = None
    for ax, gen in zip(axes[0], gens):
        grid = np.full((len(sels), len(cxs)), np.nan)
        for c in cells:
            if c["generator"] == gen and c["amortized_success"] is not None:
                grid[sels.index(c["selection"]), cxs.index(c["crossover"])] = float(c["amortized_success"])
        im = ax.imshow(grid, vmin=0, vmax=1, cmap="viridis")
        ax.set_xticks(range(len(cxs)), cxs, rotation=45, ha="right", fontsize=8)
        ax.set_yticks(range(len(sels)), sels, fontsize=8)
        ax.set_title(gen, fontsize=9)
        for i in range(len(sels)):
            for j in range(len(cxs)):
                if not np.isnan(grid[i, j]):
                    ax.text(j, i, f"{grid[i, j]:.2f}", ha="center", va="center", fontsize=7,
                            color="w" if grid[i, j] < 0.6 else "k")
    if im is not None:
        fig.colorbar(im, ax=axes[0].tolist(), shrink=0.8, label="amortized success")
    return _save(fig, path)


def ensure_dir(path: str) -> str:
    os.makedirs(path, exist_ok=True)
    return path
