/** Payload fixtures shaped exactly like the analytics API responses. */

import type {
  AnovaPayload,
  BoxplotPayload,
  HeatmapPayload,
  LearnerInfo,
  PredictResponse,
} from "../src/api.js";

export function boxplotPayload(): BoxplotPayload {
  return {
    session_id: "S1",
    parameter: "avg_saccade_rate",
    activity: "Reading",
    factor: "sex",
    labels: {
      parameter: { en: "Average saccades (per minute)", es: "Sacadas medias (por minuto)" },
      activity: { en: "Reading", es: "Lectura" },
      factor: { en: "Sex", es: "Sexo" },
    },
    series: [
      {
        level: "F",
        labels: { en: "Female", es: "Mujer" },
        n: 6,
        median: 12.0,
        q1: 10.0,
        q3: 14.0,
        whisker_low: 8.0,
        whisker_high: 18.0,
        outliers: [24.0],
      },
      {
        level: "M",
        labels: { en: "Male", es: "Hombre" },
        n: 6,
        median: 11.0,
        q1: 9.5,
        q3: 12.5,
        whisker_low: 8.5,
        whisker_high: 15.0,
        outliers: [],
      },
    ],
  };
}

export function anovaPayload(overrides: Partial<AnovaPayload> = {}): AnovaPayload {
  return {
    parameter: "avg_saccade_rate",
    factor: "sex",
    k: 2,
    N: 12,
    F: 5.4321,
    df1: 1,
    df2: 10,
    p_value: 0.0421,
    significant: true,
    alpha: 0.05,
    flag: "",
    labels: {
      parameter: { en: "Average saccades (per minute)", es: "Sacadas medias (por minuto)" },
      factor: { en: "Sex", es: "Sexo" },
      activity: { en: "Whole session", es: "Sesión completa" },
      verdict: { en: "Significant", es: "Significativo" },
    },
    ...overrides,
  };
}

export function heatmapPayload(): HeatmapPayload {
  return {
    width_cells: 4,
    height_cells: 2,
    screen_w: 1920,
    screen_h: 1080,
    cells: [
      [0, 100, 0, 50],
      [25, 0, 200, 0],
    ],
    total_mass: 375,
    participant_id: "P001",
    activity_id: "Video",
    weight_mode: "duration",
    outliers_clipped: 1,
    labels: {
      title: { en: "Attention heat map", es: "Mapa de calor de atención" },
      activity: { en: "Video watching", es: "Visualización de vídeo" },
      weight_mode: { en: "Fixation duration (ms)", es: "Duración de fijación (ms)" },
    },
  };
}

export function learners(): LearnerInfo[] {
  return [
    { participant_id: "P001", sex: "F", group: "G2", html_level: "basic" },
    { participant_id: "P002", sex: "M", group: "G3", html_level: "none" },
  ];
}

export function predictResponse(): PredictResponse {
  return {
    label: "Reading",
    score: 0.87,
    model: { session_id: "S1", name: "rf" },
    labels: {
      label: { en: "Reading", es: "Lectura" },
      title: { en: "Prediction", es: "Predicción" },
    },
  };
}
