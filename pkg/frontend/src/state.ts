/**
 * View state, URL-encoded in the location hash so analyst views are
 * shareable and bookmarkable. Only values differing from the defaults are
 * written, keeping URLs short.
 */

import type { Locale } from "./i18n.js";

export type ViewName = "boxplot" | "heatmap" | "anova" | "predict";

export interface ViewState {
  view: ViewName;
  locale: Locale;
  session: string;
  parameter: string;
  factor: string; // "" = no demographic filter
  activity: string; // box plot / ANOVA activity, e.g. WholeSession
  learner: string;
  heatmapActivity: string; // "all" or an activity id
  mode: "duration" | "count";
  api: string; // API base URL
}

export const DEFAULT_STATE: ViewState = {
  view: "boxplot",
  locale: "en",
  session: "",
  parameter: "avg_saccade_rate",
  factor: "sex",
  activity: "WholeSession",
  learner: "",
  heatmapActivity: "all",
  mode: "duration",
  api: "http://127.0.0.1:8000/api/v1",
};

const VIEWS: ViewName[] = ["boxplot", "heatmap", "anova", "predict"];

export function encodeState(state: ViewState): string {
  const params = new URLSearchParams();
  for (const key of Object.keys(DEFAULT_STATE) as (keyof ViewState)[]) {
    if (state[key] !== DEFAULT_STATE[key]) {
      params.set(key, String(state[key]));
    }
  }
  return params.toString();
}

export function decodeState(encoded: string): ViewState {
  const params = new URLSearchParams(encoded.replace(/^#/, ""));
  const state: ViewState = { ...DEFAULT_STATE };
  const view = params.get("view");
  if (view && (VIEWS as string[]).includes(view)) state.view = view as ViewName;
  const locale = params.get("locale");
  if (locale === "en" || locale === "es") state.locale = locale;
  const mode = params.get("mode");
  if (mode === "duration" || mode === "count") state.mode = mode;
  for (const key of [
    "session",
    "parameter",
    "factor",
    "activity",
    "learner",
    "heatmapActivity",
    "api",
  ] as const) {
    const value = params.get(key);
    if (value !== null) state[key] = value;
  }
  return state;
}
