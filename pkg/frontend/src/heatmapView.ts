/**
 * Attention heatmap over a screen-proportioned canvas. Cell values come
 * straight from the stored grid payload; scaling to color intensity is the
 * only computation, and hovering reports the raw payload value.
 */

import type { HeatmapPayload } from "./api.js";
import type { I18n } from "./i18n.js";

/** Minimal slice of CanvasRenderingContext2D the renderer touches. */
export interface Ctx2dLike {
  fillStyle: string | CanvasGradient | CanvasPattern;
  fillRect(x: number, y: number, w: number, h: number): void;
}

/** Black-body style ramp: black -> red -> yellow -> white. */
export function heatColor(v: number): string {
  const x = Math.min(1, Math.max(0, v));
  const r = Math.round(255 * Math.min(1, 3 * x));
  const g = Math.round(255 * Math.min(1, Math.max(0, 3 * x - 1)));
  const b = Math.round(255 * Math.min(1, Math.max(0, 3 * x - 2)));
  return `rgb(${r},${g},${b})`;
}

export function maxCell(payload: HeatmapPayload): number {
  let peak = 0;
  for (const row of payload.cells) {
    for (const v of row) if (v > peak) peak = v;
  }
  return peak;
}

export function drawHeatmap(
  ctx: Ctx2dLike,
  payload: HeatmapPayload,
  canvasW: number,
  canvasH: number,
): void {
  const peak = maxCell(payload);
  const cellW = canvasW / payload.width_cells;
  const cellH = canvasH / payload.height_cells;
  ctx.fillStyle = "rgb(0,0,0)";
  ctx.fillRect(0, 0, canvasW, canvasH);
  for (let row = 0; row < payload.height_cells; row++) {
    for (let col = 0; col < payload.width_cells; col++) {
      const value = payload.cells[row][col];
      if (value <= 0) continue;
      ctx.fillStyle = heatColor(peak > 0 ? value / peak : 0);
      // ceil the extents so adjacent cells leave no hairline gaps
      ctx.fillRect(
        Math.floor(col * cellW),
        Math.floor(row * cellH),
        Math.ceil(cellW),
        Math.ceil(cellH),
      );
    }
  }
}

export interface CellHit {
  row: number;
  col: number;
  value: number;
}

/** Which grid cell a canvas pixel falls in, with its payload value. */
export function cellAt(
  payload: HeatmapPayload,
  canvasW: number,
  canvasH: number,
  px: number,
  py: number,
): CellHit | null {
  if (px < 0 || py < 0 || px >= canvasW || py >= canvasH) return null;
  const col = Math.floor((px / canvasW) * payload.width_cells);
  const row = Math.floor((py / canvasH) * payload.height_cells);
  if (row >= payload.height_cells || col >= payload.width_cells) return null;
  return { row, col, value: payload.cells[row][col] };
}

export function renderHeatmapView(
  container: HTMLElement,
  payload: HeatmapPayload,
  i18n: I18n,
): void {
  container.textContent = "";
  const title = document.createElement("h3");
  title.className = "chart-title";
  title.textContent = `${i18n.pick(payload.labels.title)} — ${payload.participant_id} — ${i18n.pick(payload.labels.activity)}`;
  container.appendChild(title);

  // Canvas keeps the screen's aspect ratio.
  const width = 640;
  const height = Math.round((width * payload.screen_h) / payload.screen_w);
  const canvas = document.createElement("canvas");
  canvas.width = width;
  canvas.height = height;
  canvas.className = "heatmap-canvas";
  container.appendChild(canvas);

  const readout = document.createElement("div");
  readout.className = "cell-readout";
  readout.textContent = " ";
  container.appendChild(readout);

  const ctx = canvas.getContext("2d");
  if (ctx) drawHeatmap(ctx, payload, width, height);

  canvas.addEventListener("mousemove", (ev: MouseEvent) => {
    const rect = canvas.getBoundingClientRect();
    const scaleX = rect.width > 0 ? width / rect.width : 1;
    const scaleY = rect.height > 0 ? height / rect.height : 1;
    const hit = cellAt(
      payload,
      width,
      height,
      (ev.clientX - rect.left) * scaleX,
      (ev.clientY - rect.top) * scaleY,
    );
    if (hit) {
      readout.textContent =
        `${i18n.t("cell_mass")}: ${formatMass(hit.value)} ` +
        `(${i18n.t("row")} ${hit.row}, ${i18n.t("column")} ${hit.col}) — ` +
        `${i18n.pick(payload.labels.weight_mode)}`;
    }
  });

  const meta = document.createElement("p");
  meta.className = "heatmap-meta";
  meta.textContent =
    `${i18n.t("total_mass")}: ${formatMass(payload.total_mass)} — ` +
    `${i18n.t("clipped")}: ${payload.outliers_clipped}`;
  container.appendChild(meta);
}

export function formatMass(value: number): string {
  return Number.isInteger(value) ? String(value) : value.toFixed(2);
}
