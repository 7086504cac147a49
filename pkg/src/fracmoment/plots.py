"""Figure rendering for the CLI sweep reports.

Sweeps emit CSV as the primary artifact; when asked, the CLI also renders
the same rows as a matplotlib figure next to the delimited output.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

plt.rcParams.update(
    {
        "figure.figsize": (7.0, 4.5),
        "figure.dpi": 130,
        "axes.grid": True,
        "grid.alpha": 0.3,
        "axes.spines.top": False,
        "axes.spines.right": False,
        "legend.frameon": False,
    }
)

# Columns that are bookkeeping rather than curves.
_SKIP_COLUMNS = {"verify_abs_diff"}


def render_sweep(rows, x_column, path, ylabel="", title="", logx=False, logy=False):
    """Plot every numeric column of ``rows`` against ``x_column``.

    ``rows`` is a list of dicts sharing the same keys (the CSV rows).
    Returns the path written.
    """
    if not rows:
        raise ValueError("nothing to plot: no sweep rows")
    xs = [row[x_column] for row in rows]
    fig, ax = plt.subplots()
    for key in rows[0]:
        if key == x_column or key in _SKIP_COLUMNS:
            continue
        ys = [row[key] for row in rows]
        if not all(isinstance(y, (int, float)) for y in ys):
            continue
        ax.plot(xs, ys, marker="o", markersize=3, label=key)
    if logx:
        ax.set_xscale("log")
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(x_column)
    if ylabel:
        ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
