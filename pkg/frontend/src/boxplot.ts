/**
 * Box plot view. The five-number summaries come precomputed from the API;
 * the only arithmetic here is mapping values onto pixels.
 */

import type { BoxplotPayload, BoxplotSeries } from "./api.js";
import type { I18n } from "./i18n.js";

export const ACTIVITY_COLORS: Record<string, string> = {
  Video: "#3d7edb",
  Reading: "#3da55a",
  Assignment: "#e08a2e",
  WholeSession: "#8a8a8a",
};

export function activityColor(activity: string): string {
  return ACTIVITY_COLORS[activity] ?? "#8a5ac2";
}

export interface BoxGeometry {
  level: string;
  cx: number;
  boxLeft: number;
  boxWidth: number;
  medianY: number;
  q1Y: number;
  q3Y: number;
  whiskerLowY: number;
  whiskerHighY: number;
  outlierYs: number[];
}

export interface Layout {
  width: number;
  height: number;
  plotTop: number;
  plotBottom: number;
  boxes: BoxGeometry[];
  ticks: { y: number; value: number }[];
  toY(value: number): number;
}

function extent(series: BoxplotSeries[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const s of series) {
    lo = Math.min(lo, s.whisker_low, ...s.outliers);
    hi = Math.max(hi, s.whisker_high, ...s.outliers);
  }
  if (!isFinite(lo) || !isFinite(hi)) {
    lo = 0;
    hi = 1;
  }
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  return [lo, hi];
}

export function computeLayout(
  payload: BoxplotPayload,
  width = 640,
  height = 360,
): Layout {
  const plotTop = 16;
  const plotBottom = height - 36;
  const plotLeft = 64;
  const [lo, hi] = extent(payload.series);
  const pad = 0.05 * (hi - lo);
  const vLo = lo - pad;
  const vHi = hi + pad;
  const toY = (value: number): number =>
    plotBottom - ((value - vLo) / (vHi - vLo)) * (plotBottom - plotTop);

  const n = payload.series.length;
  const slot = (width - plotLeft - 16) / Math.max(n, 1);
  const boxWidth = Math.min(72, slot * 0.5);
  const boxes = payload.series.map((s, i): BoxGeometry => {
    const cx = plotLeft + slot * (i + 0.5);
    return {
      level: s.level,
      cx,
      boxLeft: cx - boxWidth / 2,
      boxWidth,
      medianY: toY(s.median),
      q1Y: toY(s.q1),
      q3Y: toY(s.q3),
      whiskerLowY: toY(s.whisker_low),
      whiskerHighY: toY(s.whisker_high),
      outlierYs: s.outliers.map(toY),
    };
  });

  const ticks = [];
  const nTicks = 5;
  for (let i = 0; i < nTicks; i++) {
    const value = vLo + ((vHi - vLo) * i) / (nTicks - 1);
    ticks.push({ y: toY(value), value });
  }
  return { width, height, plotTop, plotBottom, boxes, ticks, toY };
}

const SVG_NS = "http://www.w3.org/2000/svg";

function svgEl(name: string, attrs: Record<string, string | number>): SVGElement {
  const el = document.createElementNS(SVG_NS, name);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, String(value));
  }
  return el;
}

export function renderBoxplot(
  container: HTMLElement,
  payload: BoxplotPayload,
  i18n: I18n,
): void {
  container.textContent = "";
  const layout = computeLayout(payload);
  const color = activityColor(payload.activity);

  const title = document.createElement("h3");
  title.className = "chart-title";
  title.textContent = `${i18n.pick(payload.labels.parameter)} — ${i18n.pick(
    payload.labels.activity,
  )}`;
  container.appendChild(title);

  const svg = svgEl("svg", {
    viewBox: `0 0 ${layout.width} ${layout.height}`,
    width: layout.width,
    height: layout.height,
    role: "img",
  }) as SVGSVGElement;
  svg.classList.add("boxplot");

  for (const tick of layout.ticks) {
    svg.appendChild(
      svgEl("line", {
        x1: 56, x2: layout.width - 8, y1: tick.y, y2: tick.y,
        class: "gridline",
      }),
    );
    const label = svgEl("text", { x: 50, y: tick.y + 4, class: "tick-label", "text-anchor": "end" });
    label.textContent = formatValue(tick.value);
    svg.appendChild(label);
  }

  payload.series.forEach((series, i) => {
    const g = layout.boxes[i];
    const group = svgEl("g", { class: "box", "data-level": g.level });
    // whisker stem and caps
    group.appendChild(svgEl("line", { x1: g.cx, x2: g.cx, y1: g.whiskerLowY, y2: g.q1Y, class: "whisker" }));
    group.appendChild(svgEl("line", { x1: g.cx, x2: g.cx, y1: g.q3Y, y2: g.whiskerHighY, class: "whisker" }));
    group.appendChild(svgEl("line", { x1: g.cx - g.boxWidth / 4, x2: g.cx + g.boxWidth / 4, y1: g.whiskerLowY, y2: g.whiskerLowY, class: "whisker" }));
    group.appendChild(svgEl("line", { x1: g.cx - g.boxWidth / 4, x2: g.cx + g.boxWidth / 4, y1: g.whiskerHighY, y2: g.whiskerHighY, class: "whisker" }));
    // interquartile box and median
    group.appendChild(
      svgEl("rect", {
        x: g.boxLeft, y: g.q3Y, width: g.boxWidth, height: Math.max(1, g.q1Y - g.q3Y),
        fill: color, "fill-opacity": 0.45, stroke: color, class: "iqr-box",
      }),
    );
    group.appendChild(
      svgEl("line", { x1: g.boxLeft, x2: g.boxLeft + g.boxWidth, y1: g.medianY, y2: g.medianY, class: "median", stroke: color }),
    );
    for (const y of g.outlierYs) {
      group.appendChild(svgEl("circle", { cx: g.cx, cy: y, r: 3, class: "outlier", stroke: color, fill: "none" }));
    }
    // population label + n
    const label = svgEl("text", { x: g.cx, y: layout.height - 18, class: "series-label", "text-anchor": "middle" });
    label.textContent = i18n.pick(series.labels);
    group.appendChild(label);
    const nLabel = svgEl("text", { x: g.cx, y: layout.height - 4, class: "series-n", "text-anchor": "middle" });
    nLabel.textContent = `n=${series.n}`;
    group.appendChild(nLabel);
    svg.appendChild(group);
  });

  container.appendChild(svg);

  const legend = document.createElement("div");
  legend.className = "legend";
  const swatch = document.createElement("span");
  swatch.className = "swatch";
  swatch.style.backgroundColor = color;
  legend.appendChild(swatch);
  const legendText = document.createElement("span");
  legendText.textContent = `${i18n.t("legend")}: ${i18n.pick(payload.labels.activity)}`;
  legend.appendChild(legendText);
  container.appendChild(legend);
}

export function formatValue(value: number): string {
  if (!isFinite(value)) return String(value);
  const magnitude = Math.abs(value);
  if (magnitude >= 100) return value.toFixed(0);
  if (magnitude >= 1) return value.toFixed(2);
  return value.toPrecision(3);
}
