"""Optional figures for the CLI's ``--plot`` flag.

matplotlib is imported lazily, so the rest of the package never depends
on it.  Each renderer reads the CSV the CLI has just written and saves a
PNG next to it.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

__all__ = ["figure", "read_csv", "render_csv"]

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def figure(width: float = 6.0, height: float | None = None):
    """Figure and axes with golden-ratio proportions and the top/right spines hidden."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(width, height or width * GOLDEN))
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    return fig, ax


def read_csv(path) -> dict[str, np.ndarray]:
    """Columns of a CLI CSV keyed by header name; ``#`` lines are skipped."""
    lines = [ln for ln in Path(path).read_text().splitlines() if ln and not ln.startswith("#")]
    header = lines[0].split(",")
    data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]]).reshape(-1, len(header))
    return {name: data[:, j] for j, name in enumerate(header)}


# kind -> (x column, y columns, x label, y label, log-y)
_LAYOUTS = {
    "series": ("t", ["sup"], "t", "sup |u|", True),
    "profile": ("y", ["f"], "y", "f(y)", False),
    "branch": ("mu", ["f0"], "mu", "f(0)", False),
    "kernel": ("y", ["F", "F1", "F2", "F3", "F4"], "y", "F^(m)(y)", False),
    "steady": ("x", ["u"], "x", "u(x)", False),
    "fibering": ("r", ["phi"], "r", "phi_v(r)", False),
}


def render_csv(kind: str, csv_path, out=None) -> Path:
    """Plot a CLI CSV of the given ``kind``; returns the PNG path."""
    if kind not in _LAYOUTS:
        raise ValueError(f"no figure layout for {kind!r}")
    xcol, ycols, xlabel, ylabel, logy = _LAYOUTS[kind]
    cols = read_csv(csv_path)
    fig, ax = figure()
    for name in ycols:
        ax.plot(cols[xcol], cols[name], lw=1.2, label=name if len(ycols) > 1 else None)
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if len(ycols) > 1:
        ax.legend(frameon=False)
    out = Path(out) if out is not None else Path(csv_path).with_suffix(".png")
    fig.savefig(out, dpi=150, bbox_inches="tight")
    _pyplot().close(fig)
    return out
