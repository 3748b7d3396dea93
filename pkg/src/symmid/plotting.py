"""Figures for CLI reports.

Everything renders off-screen with the Agg backend and is written to disk
through :func:`save_figure`.
"""

from __future__ import annotations

from pathlib import Path
from typing import Dict, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "font.size": 10,
    "axes.labelsize": 10,
    "axes.titlesize": 11,
    "legend.fontsize": 9,
    "xtick.labelsize": 9,
    "ytick.labelsize": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.5,
    "lines.markersize": 5,
    "figure.dpi": 100,
    "savefig.dpi": 150,
    "svg.hashsalt": "symmid",
}


def set_style() -> None:
    plt.rcParams.update(STYLE)


def save_figure(fig, path, width: float = 5.9, height: float | None = None) -> Path:
    """Write fig to path; height defaults to width over the golden ratio."""
    if height is None:
        height = width / 1.618
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.set_size_inches((width, height))
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None} if path.suffix == ".png" else None)
    plt.close(fig)
    return path


def plot_hilbert_functions(hfs: Dict[int, Sequence[int]], path, title: str = "") -> Path:
    """One line per n: HF(R_n/I_n) against degree, on a log scale."""
    set_style()
    fig, ax = plt.subplots()
    for n, hf in sorted(hfs.items()):
        ax.plot(range(len(hf)), hf, marker="o", label=f"n={n}")
    ax.set_yscale("log")
    ax.set_xlabel("degree")
    ax.set_ylabel("HF")
    ax.set_title(title or "Hilbert functions")
    ax.legend()
    return save_figure(fig, path)


def plot_betti_table(beta: Dict[Tuple[int, int], int], path, title: str = "") -> Path:
    """Heat map of log10(1 + beta) indexed by homological degree and row j - i."""
    import numpy as np

    set_style()
    cols = max((i for i, _ in beta), default=0) + 1
    rows = sorted({j - i for i, j in beta}) or [0]
    lo, hi = min(rows), max(rows)
    grid = np.zeros((hi - lo + 1, cols))
    for (i, j), v in beta.items():
        grid[j - i - lo, i] = v
    fig, ax = plt.subplots()
    im = ax.imshow(np.log10(1 + grid), aspect="auto", cmap="viridis", origin="upper")
    for (y, x), v in np.ndenumerate(grid):
        if v:
            ax.text(x, y, str(int(v)), ha="center", va="center", color="w", fontsize=8)
    ax.set_xticks(range(cols))
    ax.set_yticks(range(hi - lo + 1))
    ax.set_yticklabels([str(k) for k in range(lo, hi + 1)])
    ax.set_xlabel("i")
    ax.set_ylabel("j - i")
    ax.grid(False)
    ax.set_title(title or "Betti table")
    fig.colorbar(im, ax=ax, label="log10(1 + beta)")
    return save_figure(fig, path)


def plot_multiplicity_ratio(ns: Sequence[int], ratios: Sequence[float], limit: float, path,
                            title: str = "") -> Path:
    set_style()
    fig, ax = plt.subplots()
    ax.plot(ns, ratios, marker="o", label="e / n^(d-1)")
    ax.axhline(limit, color="k", linestyle="--", label="limit")
    ax.set_xlabel("n")
    ax.set_ylabel("ratio")
    ax.set_title(title or "Multiplicity growth")
    ax.legend()
    return save_figure(fig, path)


def plot_betti_totals(totals: Dict[int, Sequence[int]], path, title: str = "") -> Path:
    """Total Betti numbers per homological degree, one line per n."""
    set_style()
    fig, ax = plt.subplots()
    for n, tot in sorted(totals.items()):
        ax.plot(range(len(tot)), tot, marker="s", label=f"n={n}")
    ax.set_yscale("log")
    ax.set_xlabel("homological degree i")
    ax.set_ylabel("beta_i")
    ax.set_title(title or "Total Betti numbers")
    ax.legend()
    return save_figure(fig, path)
