"""Figures for the sweep reports (matplotlib, file output only)."""

from __future__ import annotations

from pathlib import Path
from typing import Mapping

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .asymptotics import DeckSweep  # noqa: E402
from .overall import OverallResult  # noqa: E402


def plot_deck_sweep(sweeps: Mapping[str, DeckSweep], path: Path, metric: str = "E[X]") -> Path:
    """Log-log plot of |value(n) - limit| against the number of decks.

    A dashed ``1/n`` guide is drawn through the first point of the first
    variant.  Zero gaps cannot be shown on a log axis and are dropped.
    """
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    guide = None
    for label, sweep in sweeps.items():
        pts = [(n, float(g)) for n, g in sweep.reports[metric].gaps if g > 0]
        if not pts:
            continue
        ns, gaps = zip(*pts)
        ax.loglog(ns, gaps, marker="o", label=label)
        if guide is None:
            guide = pts[0]
    if guide is not None:
        n0, g0 = guide
        ns = [n for n in sweeps[next(iter(sweeps))].n_list if n >= n0]
        ax.loglog(ns, [g0 * n0 / n for n in ns], "k--", linewidth=0.8, label="1/n")
    ax.set_xlabel("decks n")
    ax.set_ylabel(f"|{metric}(n) - {metric}(with replacement)|")
    ax.set_title(f"Convergence of {metric} to the with-replacement value")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_rule_sweep(grid: Mapping[str, Mapping[str, OverallResult]], path: Path) -> Path:
    """Grouped bars of E[X] per dealer rule, one colour per variant.

    Threshold rules and the two degenerate dealers (always hit, always
    stand) differ by an order of magnitude, so they get separate panels.
    """
    labels = list(grid)
    rules = list(next(iter(grid.values())))
    panels = [[r for r in rules if r[0] in "HS"], [r for r in rules if r[0] not in "HS"]]
    panels = [p for p in panels if p]
    width = 0.8 / max(len(labels), 1)
    fig, axes = plt.subplots(1, len(panels), figsize=(8.4, 4.4), squeeze=False, gridspec_kw={"width_ratios": [len(p) for p in panels]})
    for ax, names in zip(axes[0], panels):
        for i, label in enumerate(labels):
            xs = [r + i * width for r in range(len(names))]
            ax.bar(xs, [float(grid[label][rule].ev) for rule in names], width, label=label)
        ax.set_xticks([r + width * (len(labels) - 1) / 2 for r in range(len(names))])
        ax.set_xticklabels(names, rotation=30)
        ax.axhline(0, color="black", linewidth=0.6)
    axes[0][0].set_ylabel("E[X] per unit bet")
    axes[0][0].legend()
    fig.suptitle("Player expectation by dealer rule")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
