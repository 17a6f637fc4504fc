"""Render measured series as log-log PNG figures next to their CSV tables."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def render_series(series, path, title=""):
    """Save one series (plus its reference overlays) as a PNG.

    The value axis falls back to linear scale whenever the data contain
    non-positive entries (ratio or flag series).
    """
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    values = np.asarray(series.values, dtype=float)
    log_y = series.log_y and bool((values > 0.0).all())
    ax.set_xscale("log")
    if log_y:
        ax.set_yscale("log")
    ax.plot(series.indices, values, "o-", ms=3.5, lw=1.0, label="measured")
    for label, xs, ys in series.references:
        ax.plot(xs, ys, "--", lw=1.2, label=label)
    ax.set_xlabel(series.index_label)
    ax.set_ylabel("value")
    if title:
        ax.set_title(title, fontsize=10)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
