"""Deterministic SVG charts (matplotlib, Agg backend)."""

from __future__ import annotations

import io
from typing import Mapping

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

_RC = {"svg.hashsalt": "redshift", "svg.fonttype": "none", "font.size": 8,
       "path.simplify": False}


def _dots(ax, dims: Mapping[tuple[int, int], int], color: str):
    xs, ys = [], []
    for (x, y), d in sorted(dims.items()):
        for i in range(d):
            # stack multiple classes side by side
            xs.append(x + 0.18 * (i - (d - 1) / 2))
            ys.append(y)
    ax.scatter(xs, ys, s=9, c=color, linewidths=0)


def _svg(fig) -> str:
    buf = io.StringIO()
    fig.savefig(buf, format="svg", metadata={"Date": None, "Creator": None})
    plt.close(fig)
    return buf.getvalue()


def ext_chart(dims: Mapping[tuple[int, int], int], title: str = "") -> str:
    """Adams chart: x = stem t - s, y = filtration s, one dot per class."""
    by_stem = {(t - s, s): d for (s, t), d in dims.items() if d}
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(7, 3.5))
        _dots(ax, by_stem, "black")
        ax.set_xlabel("t - s")
        ax.set_ylabel("s")
        if by_stem:
            ax.set_xlim(min(x for x, _ in by_stem) - 1, max(x for x, _ in by_stem) + 1)
            ax.set_ylim(-0.5, max(y for _, y in by_stem) + 0.5)
        ax.set_title(title)
        ax.grid(True, linewidth=0.3)
        return _svg(fig)


def page_chart(dims: Mapping[tuple[int, int], int], title: str = "",
               arrows: list[tuple[tuple[int, int], tuple[int, int]]] = ()) -> str:
    """Spectral-sequence page: x = s, y = t, one dot per class, d^r as segments."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(7, 5))
        for (s0, t0), (s1, t1) in arrows:
            ax.plot([s0, s1], [t0, t1], color="tab:red", linewidth=0.4)
        _dots(ax, dims, "tab:blue")
        ax.set_xlabel("s")
        ax.set_ylabel("t")
        ax.set_title(title)
        ax.grid(True, linewidth=0.3)
        return _svg(fig)


def series_chart(rows: list[tuple[int, int, int]], title: str = "") -> str:
    """Computed vs expected dimension per degree."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(7, 3))
        if rows:
            d, got, want = zip(*rows)
            ax.bar(d, want, width=0.9, color="lightgray", label="expected")
            ax.plot(d, got, "k.", markersize=3, label="computed")
            ax.legend(loc="upper left")
        ax.set_xlabel("degree")
        ax.set_ylabel("dim")
        ax.set_title(title)
        return _svg(fig)
