"""Matplotlib figure rendering for the report path.

Imported lazily by the CLI so plain library use never touches a backend.
All rendering goes through Agg and writes PNG files; with fixed inputs the
bytes are reproducible run to run.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = ["save_surface", "save_convergence"]

_FIGSIZE = (7.0, 5.0)
_DPI = 130


def save_surface(path: str | Path, xs, ys, values, title: str, zlabel: str = "u") -> Path:
    """Render a field on a tensor grid as a 3D surface and save it."""
    xs = np.asarray(xs, float)
    ys = np.asarray(ys, float)
    values = np.asarray(values, float)
    xg, yg = np.meshgrid(xs, ys, indexing="ij")
    fig = plt.figure(figsize=_FIGSIZE)
    ax = fig.add_subplot(projection="3d")
    ax.plot_surface(xg, yg, values, cmap="viridis", linewidth=0.2, edgecolor="k", alpha=0.95)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_zlabel(zlabel)
    ax.set_title(title)
    path = Path(path)
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def save_convergence(path: str | Path, orders, errors, metric: str) -> Path:
    """Render error versus polynomial order on log-log axes and save it."""
    orders = np.asarray(list(orders), float)
    errors = np.asarray(list(errors), float)
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    positive = errors > 0
    ax.loglog(orders[positive], errors[positive], "o-", color="tab:blue")
    if np.any(~positive):
        ax.plot(orders[~positive], np.full(np.count_nonzero(~positive), np.nan))
    ax.set_xlabel("polynomial order n")
    ax.set_ylabel(metric)
    ax.set_title(f"{metric} vs polynomial order")
    ax.grid(True, which="both", alpha=0.3)
    path = Path(path)
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path
