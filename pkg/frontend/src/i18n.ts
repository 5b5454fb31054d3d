/**
 * Locale handling. Every string the dashboard itself renders lives in
 * UI_STRINGS with both locales; strings describing server-side entities
 * (parameters, factors, activities, verdicts) arrive inside API payloads
 * as {en, es} pairs, so switching locale never needs a refetch.
 */

export type Locale = "en" | "es";

export interface LabelPair {
  en: string;
  es: string;
}

export const UI_STRINGS: Record<string, LabelPair> = {
  app_title: { en: "Visual attention analytics", es: "Analítica de atención visual" },
  tab_boxplot: { en: "Box plots", es: "Diagramas de cajas" },
  tab_heatmap: { en: "Heat map", es: "Mapa de calor" },
  tab_anova: { en: "ANOVA", es: "ANOVA" },
  tab_predict: { en: "Prediction", es: "Predicción" },
  session: { en: "Session", es: "Sesión" },
  parameter: { en: "Parameter", es: "Parámetro" },
  factor: { en: "Filter by", es: "Filtrar por" },
  no_factor: { en: "All learners", es: "Todos los estudiantes" },
  activity: { en: "Activity", es: "Actividad" },
  learner: { en: "Learner", es: "Estudiante" },
  weight_mode: { en: "Weighting", es: "Ponderación" },
  mode_duration: { en: "Fixation duration", es: "Duración de fijación" },
  mode_count: { en: "Fixation count", es: "Número de fijaciones" },
  observations: { en: "observations", es: "observaciones" },
  outliers: { en: "Outliers", es: "Valores atípicos" },
  legend: { en: "Legend", es: "Leyenda" },
  f_statistic: { en: "F statistic", es: "Estadístico F" },
  degrees_of_freedom: { en: "Degrees of freedom", es: "Grados de libertad" },
  p_value: { en: "p-value", es: "Valor p" },
  alpha_level: { en: "Significance level", es: "Nivel de significación" },
  undefined_result: { en: "Undefined (no variance)", es: "Indefinido (sin varianza)" },
  groups_compared: { en: "Populations compared", es: "Poblaciones comparadas" },
  predict_title: { en: "Activity prediction probe", es: "Sonda de predicción de actividad" },
  predict_submit: { en: "Predict", es: "Predecir" },
  predict_hint: {
    en: "Enter the 16 window features in export order, or load an example.",
    es: "Introduzca las 16 características de la ventana en el orden del fichero, o cargue un ejemplo.",
  },
  predict_example: { en: "Load example", es: "Cargar ejemplo" },
  predicted_label: { en: "Predicted activity", es: "Actividad predicha" },
  confidence: { en: "Confidence", es: "Confianza" },
  model_used: { en: "Model", es: "Modelo" },
  model_rf: { en: "Random Forest", es: "Bosque aleatorio" },
  model_mlp: { en: "Neural Network", es: "Red neuronal" },
  cell_mass: { en: "Cell value", es: "Valor de la celda" },
  row: { en: "Row", es: "Fila" },
  column: { en: "Column", es: "Columna" },
  total_mass: { en: "Total mass", es: "Masa total" },
  clipped: { en: "Off-screen fixations clipped", es: "Fijaciones fuera de pantalla recortadas" },
  loading: { en: "Loading…", es: "Cargando…" },
  load_failed: { en: "Request failed", es: "La petición falló" },
  language: { en: "Language", es: "Idioma" },
  share_hint: {
    en: "Filters live in the URL; copy it to share this exact view.",
    es: "Los filtros viven en la URL; cópiela para compartir esta vista exacta.",
  },
};

export class I18n {
  locale: Locale;
  private server: Record<string, LabelPair> = {};

  constructor(locale: Locale = "en") {
    this.locale = locale;
  }

  /** Merge the label catalog served by the API (GET /labels). */
  addServerCatalog(catalog: Record<string, LabelPair>): void {
    this.server = { ...this.server, ...catalog };
  }

  pair(key: string): LabelPair {
    return UI_STRINGS[key] ?? this.server[key] ?? { en: key, es: key };
  }

  /** Translate a catalog key. */
  t(key: string): string {
    return this.pick(this.pair(key));
  }

  /** Pick the active locale out of a payload-provided pair. */
  pick(pair: Partial<LabelPair> | undefined): string {
    if (!pair) return "";
    return pair[this.locale] ?? pair.en ?? pair.es ?? "";
  }
}
