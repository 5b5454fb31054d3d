/**
 * ANOVA panel: F, degrees of freedom, p, and a significance badge at the
 * level the server evaluated. All numbers come from the payload.
 */

import type { AnovaPayload } from "./api.js";
import type { I18n } from "./i18n.js";

export function formatP(p: number | null): string {
  if (p === null) return "—";
  if (p === 0) return "0";
  if (p < 1e-4) return p.toExponential(2);
  return p.toFixed(4);
}

export function formatF(f: number | null): string {
  if (f === null) return "—";
  if (!isFinite(f)) return "∞";
  return f.toPrecision(5);
}

export function renderAnova(
  container: HTMLElement,
  payload: AnovaPayload,
  i18n: I18n,
): void {
  container.textContent = "";
  const title = document.createElement("h3");
  title.className = "chart-title";
  title.textContent = `${i18n.pick(payload.labels.parameter)} × ${i18n.pick(
    payload.labels.factor,
  )} — ${i18n.pick(payload.labels.activity)}`;
  container.appendChild(title);

  const badge = document.createElement("span");
  badge.className = payload.significant ? "badge badge-significant" : "badge badge-plain";
  badge.textContent = i18n.pick(payload.labels.verdict);
  container.appendChild(badge);

  const dl = document.createElement("dl");
  dl.className = "anova-stats";
  const rows: [string, string][] = [
    [i18n.t("f_statistic"), formatF(payload.F)],
    [i18n.t("degrees_of_freedom"), `${payload.df1}, ${payload.df2}`],
    [i18n.t("p_value"), formatP(payload.p_value)],
    [i18n.t("alpha_level"), String(payload.alpha)],
    [i18n.t("groups_compared"), `${payload.k} (N=${payload.N})`],
  ];
  if (payload.flag === "undefined") {
    rows.push([i18n.t("undefined_result"), payload.flag]);
  }
  for (const [term, value] of rows) {
    const dt = document.createElement("dt");
    dt.textContent = term;
    const dd = document.createElement("dd");
    dd.textContent = value;
    dl.appendChild(dt);
    dl.appendChild(dd);
  }
  container.appendChild(dl);
}
