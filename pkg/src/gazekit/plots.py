"""Matplotlib renderings written next to the delimited outputs.

The CLI report paths call these; the library itself never needs a display
(Agg backend).
"""
from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .heatmap import HeatmapGrid  # noqa: E402
from .labels import label  # noqa: E402

_ACTIVITY_COLORS = {
    "Video": "#1f77b4",
    "Reading": "#2ca02c",
    "Assignment": "#ff7f0e",
    "WholeSession": "#7f7f7f",
}


def save_heatmap_png(grid: HeatmapGrid, path: str | Path, locale: str = "en") -> Path:
    """Render a grid over screen-proportioned axes; origin at the top-left."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(8, 4.5))
    im = ax.imshow(
        grid.cells,
        cmap="hot",
        origin="upper",
        extent=(0, grid.screen_w, grid.screen_h, 0),
        aspect="equal",
    )
    title = label("heatmap", locale)
    who = grid.participant_id or "?"
    what = label(grid.activity_id, locale) if grid.activity_id else label("all_activities", locale)
    ax.set_title(f"{title} — {who} — {what}")
    ax.set_xlabel("x (px)")
    ax.set_ylabel("y (px)")
    fig.colorbar(im, ax=ax, label=label(grid.weight_mode, locale))
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def save_boxplot_png(
    series: Mapping[str, Sequence[float]],
    parameter: str,
    factor: str,
    path: str | Path,
    locale: str = "en",
    activity: str | None = None,
) -> Path:
    """Per-population box plots (1.5 IQR whiskers, same rule as the API)."""
    path = Path(path)
    levels = sorted(series)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.boxplot(
        [list(series[lv]) for lv in levels],
        tick_labels=[label(lv, locale) for lv in levels],
        whis=1.5,
    )
    ax.set_ylabel(label(parameter, locale))
    ax.set_xlabel(label(factor, locale))
    subtitle = label(activity, locale) if activity else label("all_activities", locale)
    ax.set_title(f"{label(parameter, locale)} — {subtitle}")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def save_activity_boxplot_png(
    by_activity: Mapping[str, Sequence[float]],
    parameter: str,
    path: str | Path,
    locale: str = "en",
) -> Path:
    """One box per activity, each in its own color."""
    path = Path(path)
    activities = sorted(by_activity)
    fig, ax = plt.subplots(figsize=(6, 4))
    boxes = ax.boxplot(
        [list(by_activity[a]) for a in activities],
        tick_labels=[label(a, locale) for a in activities],
        whis=1.5,
        patch_artist=True,
    )
    for patch, activity in zip(boxes["boxes"], activities):
        patch.set_facecolor(_ACTIVITY_COLORS.get(activity, "#cccccc"))
        patch.set_alpha(0.6)
    ax.set_ylabel(label(parameter, locale))
    ax.set_title(label(parameter, locale))
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def save_loss_curve_png(losses: Sequence[float], path: str | Path) -> Path:
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(range(1, len(losses) + 1), losses)
    ax.set_xlabel("epoch")
    ax.set_ylabel("training MSE")
    ax.set_yscale("log")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
