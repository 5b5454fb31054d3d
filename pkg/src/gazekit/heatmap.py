"""Duration-weighted attention heatmaps.

Each fixation deposits its duration (or 1, in count mode) into the grid
cell holding its centroid. Smoothing is a separable truncated Gaussian
whose kernel is renormalized per source cell at the borders, so the total
mass is conserved exactly rather than leaking off the grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import IO, Sequence

import numpy as np

from .errors import ConfigError, NumericError
from .features import GazeEvent
from .ingest import FIXATION

WEIGHT_DURATION = "duration"
WEIGHT_COUNT = "count"


@dataclass(frozen=True)
class HeatmapGrid:
    width_cells: int
    height_cells: int
    screen_w: float
    screen_h: float
    cells: np.ndarray  # (height_cells, width_cells), row 0 = top of screen
    total_mass: float  # ms of fixation time (or fixation count in count mode)
    participant_id: str = ""
    activity_id: str = ""  # "" = all activities
    weight_mode: str = WEIGHT_DURATION
    outliers_clipped: int = 0
    normalized: bool = False


def accumulate(
    fixations: Sequence[GazeEvent],
    *,
    width_cells: int = 96,
    height_cells: int = 54,
    screen_w: float = 1920.0,
    screen_h: float = 1080.0,
    participant_id: str = "",
    activity_id: str = "",
    weight_mode: str = WEIGHT_DURATION,
) -> HeatmapGrid:
    """Bin fixation centroids into a screen-aligned grid.

    Centroids outside the screen are clipped to the border cell and
    counted. Non-fixation events are ignored.
    """
    if width_cells < 1 or height_cells < 1 or screen_w <= 0 or screen_h <= 0:
        raise ConfigError(
            f"zero-area heatmap grid: {width_cells}x{height_cells} over "
            f"{screen_w}x{screen_h}"
        )
    if weight_mode not in (WEIGHT_DURATION, WEIGHT_COUNT):
        raise ConfigError(f"unknown heatmap weight mode {weight_mode!r}")
    cells = np.zeros((height_cells, width_cells), dtype=float)
    clipped = 0
    for e in fixations:
        if e.movement_type != FIXATION:
            continue
        x, y = e.centroid
        ix = int(x * width_cells / screen_w) if x >= 0 else -1
        iy = int(y * height_cells / screen_h) if y >= 0 else -1
        if not (0 <= x < screen_w and 0 <= y < screen_h):
            clipped += 1
        ix = min(max(ix, 0), width_cells - 1)
        iy = min(max(iy, 0), height_cells - 1)
        cells[iy, ix] += e.duration if weight_mode == WEIGHT_DURATION else 1.0
    return HeatmapGrid(
        width_cells=width_cells,
        height_cells=height_cells,
        screen_w=screen_w,
        screen_h=screen_h,
        cells=cells,
        total_mass=float(cells.sum()),
        participant_id=participant_id,
        activity_id=activity_id,
        weight_mode=weight_mode,
        outliers_clipped=clipped,
    )


def _smooth_axis(a: np.ndarray, sigma: float, axis: int) -> np.ndarray:
    radius = max(1, int(math.ceil(4.0 * sigma)))
    offsets = np.arange(-radius, radius + 1)
    kernel = np.exp(-0.5 * (offsets / sigma) ** 2)
    kernel /= kernel.sum()

    moved = np.moveaxis(a, axis, 0)
    n = moved.shape[0]
    # Per-source in-bounds kernel mass; dividing by it first makes each
    # source cell scatter exactly its own mass.
    norm = np.zeros(n)
    for d, w in zip(offsets, kernel):
        lo, hi = max(0, -int(d)), min(n, n - int(d))
        if hi > lo:
            norm[lo:hi] += w
    weighted = moved / norm.reshape((n,) + (1,) * (moved.ndim - 1))
    out = np.zeros_like(moved)
    for d, w in zip(offsets, kernel):
        lo, hi = max(0, -int(d)), min(n, n - int(d))
        if hi > lo:
            out[lo + d : hi + d] += w * weighted[lo:hi]
    return np.moveaxis(out, 0, axis)


def smooth(grid: HeatmapGrid, sigma_cells: float) -> HeatmapGrid:
    """Boundary-renormalized separable Gaussian blur; sigma 0 is identity."""
    if sigma_cells < 0:
        raise NumericError(f"smoothing sigma must be >= 0, got {sigma_cells}")
    if sigma_cells == 0:
        return replace(grid, cells=grid.cells.copy())
    cells = _smooth_axis(grid.cells, sigma_cells, axis=0)
    cells = _smooth_axis(cells, sigma_cells, axis=1)
    return replace(grid, cells=cells)


def normalize_for_display(grid: HeatmapGrid) -> HeatmapGrid:
    """Scale cells into [0,1] for rendering; an all-zero grid stays zero.

    Display grids no longer satisfy the mass-conservation invariant; the
    ``normalized`` flag marks them.
    """
    peak = float(grid.cells.max()) if grid.cells.size else 0.0
    cells = grid.cells / peak if peak > 0 else grid.cells.copy()
    return replace(grid, cells=cells, normalized=True)


def write_grid_text(grid: HeatmapGrid, sink: str | Path | IO[str]) -> None:
    """Documented grid format: key/value header then row-major cell values."""
    own = isinstance(sink, (str, Path))
    out: IO[str] = open(sink, "w", encoding="utf-8", newline="") if own else sink  # type: ignore[assignment]
    try:
        out.write("gazekit-heatmap\t1\n")
        out.write(f"width_cells\t{grid.width_cells}\n")
        out.write(f"height_cells\t{grid.height_cells}\n")
        out.write(f"screen_w\t{grid.screen_w!r}\n")
        out.write(f"screen_h\t{grid.screen_h!r}\n")
        out.write(f"participant_id\t{grid.participant_id}\n")
        out.write(f"activity_id\t{grid.activity_id}\n")
        out.write(f"weight_mode\t{grid.weight_mode}\n")
        out.write(f"total_mass\t{grid.total_mass!r}\n")
        out.write(f"outliers_clipped\t{grid.outliers_clipped}\n")
        out.write(f"normalized\t{int(grid.normalized)}\n")
        for row in grid.cells:
            out.write("\t".join(repr(float(v)) for v in row) + "\n")
    finally:
        if own:
            out.close()


def read_grid_text(source: str | Path | IO[str]) -> HeatmapGrid:
    own = isinstance(source, (str, Path))
    stream: IO[str] = open(source, "r", encoding="utf-8") if own else source  # type: ignore[assignment]
    try:
        magic = stream.readline().rstrip("\n").split("\t")
        if magic[0] != "gazekit-heatmap":
            raise ConfigError("not a gazekit heatmap grid file")
        header: dict[str, str] = {}
        for _ in range(10):
            key, value = stream.readline().rstrip("\n").split("\t", 1)
            header[key] = value
        h, w = int(header["height_cells"]), int(header["width_cells"])
        cells = np.array(
            [[float(v) for v in stream.readline().split("\t")] for _ in range(h)]
        )
        if cells.shape != (h, w):
            raise ConfigError("heatmap grid body does not match its header")
        return HeatmapGrid(
            width_cells=w,
            height_cells=h,
            screen_w=float(header["screen_w"]),
            screen_h=float(header["screen_h"]),
            cells=cells,
            total_mass=float(header["total_mass"]),
            participant_id=header["participant_id"],
            activity_id=header["activity_id"],
            weight_mode=header["weight_mode"],
            outliers_clipped=int(header["outliers_clipped"]),
            normalized=header["normalized"] == "1",
        )
    finally:
        if own:
            stream.close()


def write_pgm(grid: HeatmapGrid, sink: str | Path | IO[str]) -> None:
    """8-bit grayscale PGM (plain P2) for quick desk inspection."""
    own = isinstance(sink, (str, Path))
    out: IO[str] = open(sink, "w", encoding="utf-8", newline="") if own else sink  # type: ignore[assignment]
    try:
        peak = float(grid.cells.max())
        scaled = (
            np.zeros_like(grid.cells, dtype=int)
            if peak <= 0
            else np.rint(grid.cells / peak * 255).astype(int)
        )
        out.write("P2\n")
        out.write(f"{grid.width_cells} {grid.height_cells}\n255\n")
        for row in scaled:
            out.write(" ".join(str(int(v)) for v in row) + "\n")
    finally:
        if own:
            out.close()


def grid_to_record(grid: HeatmapGrid) -> dict:
    return {
        "width_cells": grid.width_cells,
        "height_cells": grid.height_cells,
        "screen_w": grid.screen_w,
        "screen_h": grid.screen_h,
        "cells": [[float(v) for v in row] for row in grid.cells],
        "total_mass": grid.total_mass,
        "participant_id": grid.participant_id,
        "activity_id": grid.activity_id,
        "weight_mode": grid.weight_mode,
        "outliers_clipped": grid.outliers_clipped,
        "normalized": grid.normalized,
    }


def grid_from_record(rec: dict) -> HeatmapGrid:
    return HeatmapGrid(
        width_cells=rec["width_cells"],
        height_cells=rec["height_cells"],
        screen_w=rec["screen_w"],
        screen_h=rec["screen_h"],
        cells=np.array(rec["cells"], dtype=float),
        total_mass=rec["total_mass"],
        participant_id=rec["participant_id"],
        activity_id=rec["activity_id"],
        weight_mode=rec["weight_mode"],
        outliers_clipped=rec["outliers_clipped"],
        normalized=rec["normalized"],
    )
