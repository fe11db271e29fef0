"""Figure rendering for dimension reports.

Uses the object-oriented matplotlib API with the Agg canvas directly, so no
global backend state is touched; safe to call from library code and tests.
"""

from __future__ import annotations

from pathlib import Path
from typing import Union

from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .boxcount import SlopeFit


def save_dim_plot(fit: SlopeFit, label: str, path: Union[str, Path]) -> Path:
    """Render the log-log occupancy ladder with its fitted slope to a file.

    The x axis is the scale exponent log2(1/r), the y axis log2 of the
    occupied-cell count; the fitted line and per-step slopes are annotated.
    Output format follows the file extension (png, pdf, svg).
    """
    import math

    path = Path(path)
    xs = list(fit.scales)
    ys = [math.log2(c) for c in fit.counts]
    xbar = sum(xs) / len(xs)
    ybar = sum(ys) / len(ys)
    intercept = ybar - fit.slope * xbar

    fig = Figure(figsize=(6.4, 4.2))
    FigureCanvasAgg(fig)
    ax, ax2 = fig.subplots(2, 1, sharex=True, height_ratios=[3, 1])
    ax.plot(xs, ys, "o", ms=4, color="#1f5fa8", label="occupied cells")
    ax.plot(xs, [fit.slope * x + intercept for x in xs], "-",
            color="#c44e52", lw=1.2,
            label=f"fit: slope {fit.slope:.4f}")
    ax.set_ylabel(r"$\log_2$ occupied cells")
    ax.legend(frameon=False, fontsize=9)
    ax.set_title(label)
    mids = [x + 0.5 for x in xs[:-1]]
    ax2.plot(mids, fit.per_step_slopes, "s-", ms=3, lw=0.8, color="#55a868")
    ax2.axhline(fit.slope, color="#c44e52", lw=0.8, ls="--")
    ax2.set_xlabel(r"$\log_2(1/r)$")
    ax2.set_ylabel("per-step")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    return path
