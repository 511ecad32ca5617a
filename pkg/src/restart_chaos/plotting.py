"""Matplotlib figures written next to the CSV output.

The file format follows the extension of the target path (png, pdf, svg).
Metadata that would embed the build or a timestamp is stripped so repeated
runs give identical files.
"""
from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .io import Table  # noqa: E402

__all__ = ["save_figure", "orbit_figure", "bifurcation_figure", "schedule_figure", "residual_figure"]

STYLE = {
    "font.size": 10,
    "axes.labelsize": 11,
    "axes.titlesize": 12,
    "xtick.labelsize": 9,
    "ytick.labelsize": 9,
    "figure.figsize": (8, 5),
    "figure.dpi": 100,
    "svg.hashsalt": "restart-chaos",
}


def _metadata(path: str) -> dict:
    ext = os.path.splitext(path)[1].lower()
    if ext == ".png":
        return {"Software": None}
    if ext == ".pdf":
        return {"Producer": None, "Creator": None, "CreationDate": None}
    if ext == ".svg":
        return {"Date": None, "Creator": None}
    return {}


def save_figure(fig, path: str | os.PathLike) -> None:
    path = os.fspath(path)
    directory, base = os.path.split(os.path.abspath(path))
    tmp = os.path.join(directory, ".tmp-" + base)
    try:
        fig.savefig(tmp, format=os.path.splitext(path)[1].lstrip(".") or None,
                    metadata=_metadata(path), bbox_inches="tight")
        os.replace(tmp, path)
    finally:
        plt.close(fig)
        if os.path.exists(tmp):
            os.unlink(tmp)


def _numeric(table: Table, name: str) -> np.ndarray:
    return np.array([v if isinstance(v, (int, float)) else np.nan for v in table.column(name)], dtype=float)


def orbit_figure(table: Table, path, x_column: str = "n", y_column: str = "theta", title: str | None = None):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.plot(_numeric(table, x_column), _numeric(table, y_column), ".", ms=2, color="tab:blue")
        ax.set_xlabel(x_column)
        ax.set_ylabel(y_column)
        if title:
            ax.set_title(title)
        ax.grid(alpha=0.3)
        save_figure(fig, path)


def bifurcation_figure(table: Table, path, title: str = "Bifurcation diagram"):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(10, 6))
        ax.plot(_numeric(table, "alpha"), _numeric(table, "value"), ",k", alpha=0.5)
        ax.set_xlabel("growth parameter")
        ax.set_ylabel("post-transient value")
        ax.set_ylim(-0.02, 1.02)
        ax.set_title(title)
        save_figure(fig, path)


def schedule_figure(table: Table, path, time_column: str, readout_column: str, title: str | None = None):
    """Relative times and readouts against the step index, flagged steps in red."""
    n = _numeric(table, "n")
    flagged = np.array([bool(f) for f in table.column("flags")], dtype=bool)
    with plt.rc_context(STYLE):
        fig, (top, bottom) = plt.subplots(2, 1, sharex=True, figsize=(8, 6))
        for ax, name in ((top, time_column), (bottom, readout_column)):
            y = _numeric(table, name)
            ax.plot(n[~flagged], y[~flagged], ".", ms=2, color="tab:blue", label="ok")
            if flagged.any():
                ax.plot(n[flagged], y[flagged], ".", ms=3, color="tab:red", label="flagged")
            ax.set_ylabel(name)
            ax.grid(alpha=0.3)
        bottom.set_xlabel("n")
        if flagged.any():
            top.legend(loc="upper right")
        if title:
            top.set_title(title)
        save_figure(fig, path)


def residual_figure(table: Table, path, columns: list[str], title: str | None = None):
    """Log-scale residual columns against the step index; zeros and blanks are skipped."""
    n = _numeric(table, "n")
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for name in columns:
            y = _numeric(table, name)
            keep = np.isfinite(y) & (y > 0)
            ax.semilogy(n[keep], y[keep], ".", ms=2, label=name)
        ax.set_xlabel("n")
        ax.set_ylabel("residual")
        ax.legend(loc="best")
        ax.grid(alpha=0.3, which="both")
        if title:
            ax.set_title(title)
        save_figure(fig, path)
