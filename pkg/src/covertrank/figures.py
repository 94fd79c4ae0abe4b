"""Render retrieval-curve figures to image files."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = ["render_curves_figure", "MEASURES"]

# measure name -> (method column, limit column, random column, axis label)
MEASURES = {
    "precision": ("precision", "p_limit", "p_rand", "precision"),
    "recall": ("recall", "r_limit", "r_rand", "recall"),
    "f": ("f", "f_limit", "f_rand", "F measure"),
}

# Fixed metadata keeps the PNG bytes reproducible across runs.
_METADATA = {"Software": "covertrank"}


def render_curves_figure(
    per_method: dict[str, dict],
    measure: str,
    path: str | Path,
    target_fraction: float | None = None,
) -> None:
    """Plot one measure for every method, with the theoretical limit and the
    random baseline as broken lines.

    ``per_method`` maps a method name to its curve columns (the same mapping
    written to the curves CSV).  ``target_fraction`` draws the vertical line
    where the retrieved count equals the number of target logs.
    """
    col, limit_col, rand_col, ylabel = MEASURES[measure]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    first = next(iter(per_method.values()))
    num_logs = len(first[col])
    x = [(i + 1) / num_logs for i in range(num_logs)]

    ax.plot(x, first[limit_col], "k--", linewidth=1.0, label="theoretical limit")
    ax.plot(x, first[rand_col], "k:", linewidth=1.0, label="random retrieval")
    for name, columns in per_method.items():
        ax.plot(x, columns[col], linewidth=1.6, label=name)
    if target_fraction is not None:
        ax.axvline(target_fraction, color="0.4", linewidth=0.9)

    ax.set_xlabel("fraction of logs retrieved")
    ax.set_ylabel(ylabel)
    ax.set_xlim(0.0, 1.0)
    ax.set_ylim(0.0, 1.05)
    ax.legend(loc="best", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150, metadata=_METADATA)
    plt.close(fig)
