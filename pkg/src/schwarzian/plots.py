"""Matplotlib figures for the CLI report path.

Figures land next to the delimited output files; nothing here is needed
for the numerical library itself, so matplotlib loads lazily.
"""

from __future__ import annotations

import numpy as np


def _axes(nrows=1, ncols=1, figsize=(7.0, 4.5)):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(nrows, ncols, figsize=figsize)
    return fig, ax


def save_sweep_figure(breakdowns, path) -> None:
    """Stacked contributions and the total/(C log C) band for a sweep."""
    fig, (ax1, ax2) = _axes(1, 2, figsize=(10.0, 4.0))
    cs = [b.C for b in breakdowns]
    ax1.loglog(cs, [b.total for b in breakdowns], "ko-", label="total")
    ax1.loglog(cs, [b.inner_sum for b in breakdowns], "s--", label="annuli")
    ax1.loglog(cs, [b.gap_annulus_count for b in breakdowns], "^--", label="gap annulus")
    ax1.loglog(cs, [b.rectangle_count for b in breakdowns], "v--", label="rectangles")
    ax1.set_xlabel("C")
    ax1.set_ylabel("valence bound contribution")
    ax1.legend(fontsize=8)

    ratios = [b.ratio for b in breakdowns]
    ax2.semilogx(cs, ratios, "ko-")
    ax2.axhspan(min(ratios), max(ratios), color="tab:blue", alpha=0.15)
    ax2.set_xlabel("C")
    ax2.set_ylabel("total / (C log C)")
    ax2.set_title(f"empirical band [{min(ratios):.2f}, {max(ratios):.2f}]", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)


def save_breakdown_figure(breakdown, path) -> None:
    """Bar chart of the four contributions at a single C."""
    fig, ax = _axes()
    labels = ["inner disk", "annuli", "gap annulus", "rectangles"]
    values = [
        breakdown.inner_unit,
        breakdown.inner_sum,
        breakdown.gap_annulus_count,
        breakdown.rectangle_count,
    ]
    ax.bar(labels, values, color=["#888", "#4878d0", "#ee854a", "#6acc64"])
    ax.set_ylabel("count")
    ax.set_title(f"C = {breakdown.C:g}: total bound {breakdown.total}")
    for i, v in enumerate(values):
        ax.text(i, v, str(v), ha="center", va="bottom", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)


def save_norm_heatmap(values_fn, estimate, path, n: int = 400) -> None:
    """Disk heatmap of the weighted Schwarzian field with the attaining
    point marked; values_fn maps points to (values, valid)."""
    fig, ax = _axes(figsize=(5.2, 4.5))
    x = np.linspace(-1.0, 1.0, n)
    zs = x[None, :] + 1j * x[:, None]
    inside = np.abs(zs) < 1.0 - 1e-6
    field = np.full(zs.shape, np.nan)
    vals, ok = values_fn(zs[inside])
    buf = np.where(ok, vals, np.nan)
    field[inside] = buf
    im = ax.imshow(
        field, origin="lower", extent=(-1, 1, -1, 1), cmap="viridis", interpolation="nearest"
    )
    p = estimate.attaining_point
    ax.plot([p.real], [p.imag], "r*", markersize=10)
    ax.set_title(f"sup estimate {estimate.lower_bound:.6g}", fontsize=9)
    fig.colorbar(im, ax=ax, shrink=0.85)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
