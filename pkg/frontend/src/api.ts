/**
 * Typed client for the gazekit analytics API (/api/v1). The dashboard is
 * presentation-only: every number it displays comes out of these payloads.
 */

import type { LabelPair } from "./i18n.js";

export interface BoxplotSeries {
  level: string;
  labels: LabelPair;
  n: number;
  median: number;
  q1: number;
  q3: number;
  whisker_low: number;
  whisker_high: number;
  outliers: number[];
}

export interface BoxplotPayload {
  session_id: string;
  parameter: string;
  activity: string;
  factor: string | null;
  labels: { parameter: LabelPair; activity: LabelPair; factor: LabelPair };
  series: BoxplotSeries[];
}

export interface AnovaPayload {
  parameter: string;
  factor: string;
  k: number;
  N: number;
  F: number | null;
  df1: number;
  df2: number;
  p_value: number | null;
  significant: boolean;
  alpha: number;
  flag: string;
  labels: {
    parameter: LabelPair;
    factor: LabelPair;
    activity: LabelPair;
    verdict: LabelPair;
  };
}

export interface HeatmapPayload {
  width_cells: number;
  height_cells: number;
  screen_w: number;
  screen_h: number;
  cells: number[][];
  total_mass: number;
  participant_id: string;
  activity_id: string;
  weight_mode: string;
  outliers_clipped: number;
  labels: { title: LabelPair; activity: LabelPair; weight_mode: LabelPair };
}

export interface LearnerInfo {
  participant_id: string;
  sex: string;
  group: string;
  html_level: string;
}

export interface PredictResponse {
  label: string;
  score: number;
  model: { session_id: string; name: string };
  labels: { label: LabelPair; title: LabelPair };
}

/** The 16 features, in the documented dataset-export order. */
export const FEATURE_NAMES = [
  "sex_code",
  "saccade_count",
  "v_mean",
  "v_x_mean",
  "v_y_mean",
  "v_max",
  "v_min",
  "v_std",
  "v_x_std",
  "v_y_std",
  "v_kurt",
  "v_x_kurt",
  "v_y_kurt",
  "v_skew",
  "v_x_skew",
  "v_y_skew",
] as const;

export class ApiError extends Error {
  status: number;
  constructor(status: number, detail: string) {
    super(`API ${status}: ${detail}`);
    this.status = status;
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  base: string;
  private fetchFn: FetchLike;

  constructor(base: string, fetchFn?: FetchLike) {
    this.base = base.replace(/\/$/, "");
    this.fetchFn = fetchFn ?? ((url, init) => fetch(url, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(`${this.base}${path}`, init);
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = await response.json();
        if (body && typeof body.detail === "string") detail = body.detail;
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  async sessions(): Promise<string[]> {
    const body = await this.request<{ sessions: string[] }>("/sessions");
    return body.sessions;
  }

  async learners(session: string): Promise<LearnerInfo[]> {
    const body = await this.request<{ learners: LearnerInfo[] }>(
      `/sessions/${encodeURIComponent(session)}/learners`,
    );
    return body.learners;
  }

  boxplot(
    session: string,
    parameter: string,
    activity: string,
    factor: string,
  ): Promise<BoxplotPayload> {
    const params = new URLSearchParams({ parameter, activity });
    if (factor) params.set("factor", factor);
    return this.request(`/sessions/${encodeURIComponent(session)}/boxplot?${params}`);
  }

  anova(
    session: string,
    parameter: string,
    factor: string,
    activity: string,
  ): Promise<AnovaPayload> {
    const params = new URLSearchParams({ parameter, factor, activity });
    return this.request(`/sessions/${encodeURIComponent(session)}/anova?${params}`);
  }

  heatmap(
    session: string,
    learner: string,
    activity: string,
    mode: string,
  ): Promise<HeatmapPayload> {
    const params = new URLSearchParams({ activity, mode });
    return this.request(
      `/sessions/${encodeURIComponent(session)}/heatmap/${encodeURIComponent(learner)}?${params}`,
    );
  }

  predict(features: number[], model?: { session: string; name: string }): Promise<PredictResponse> {
    const body: Record<string, unknown> = { features };
    if (model) {
      body.session_id = model.session;
      body.model = model.name;
    }
    return this.request("/predict", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  async labels(): Promise<Record<string, LabelPair>> {
    const body = await this.request<{ catalog: Record<string, LabelPair> }>("/labels");
    return body.catalog;
  }
}
