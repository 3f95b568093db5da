"""Matplotlib style for the sweep figures.

Files only: the Agg backend is selected before pyplot is imported so the
figures render without a display.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

GOLDEN = (5 ** 0.5 - 1) / 2
FIG_WIDTH = 6.4

EXACT_COLOR = "#1f1f1f"
ASYM_COLOR = "#c0392b"

PARAMS = {
    "font.family": "serif",
    "mathtext.fontset": "stix",
    "font.size": 9,
    "axes.labelsize": 10,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "lines.linewidth": 1.0,
    "lines.markersize": 3,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "figure.figsize": (FIG_WIDTH, FIG_WIDTH * GOLDEN),
    "svg.fonttype": "none",
    "svg.hashsalt": "recoupling",
}


def style():
    """Context manager applying :data:`PARAMS`; draw and save inside it."""
    return matplotlib.rc_context(PARAMS)


def new_figure(width: float = FIG_WIDTH, aspect: float = GOLDEN):
    return plt.subplots(figsize=(width, width * aspect))


def save(fig, path) -> None:
    fig.savefig(path, format="svg", bbox_inches="tight", metadata={"Date": None})
    plt.close(fig)
