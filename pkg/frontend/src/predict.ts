/**
 * Prediction probe: a 16-feature form posted to /predict, answer rendered
 * with the model's label and sigmoid/vote confidence.
 */

import { FEATURE_NAMES, type PredictResponse } from "./api.js";
import type { I18n } from "./i18n.js";

/** A plausible reading window, for one-click probing. */
export const EXAMPLE_FEATURES: number[] = [
  0, 24, 2.1, 0.4, -0.1, 3.6, 0.7, 0.6, 0.9, 0.5, -0.3, 0.1, 0.2, 0.4, -0.2, 0.1,
];

export function parseFeatures(raw: string[]): number[] {
  if (raw.length !== FEATURE_NAMES.length) {
    throw new Error(`expected ${FEATURE_NAMES.length} features, got ${raw.length}`);
  }
  return raw.map((text, i) => {
    const value = Number(text);
    if (text.trim() === "" || !isFinite(value)) {
      throw new Error(`feature ${FEATURE_NAMES[i]} is not a finite number: "${text}"`);
    }
    return value;
  });
}

export function renderPredictForm(
  container: HTMLElement,
  i18n: I18n,
  onSubmit: (features: number[]) => void,
): void {
  container.textContent = "";
  const title = document.createElement("h3");
  title.className = "chart-title";
  title.textContent = i18n.t("predict_title");
  container.appendChild(title);

  const hint = document.createElement("p");
  hint.className = "hint";
  hint.textContent = i18n.t("predict_hint");
  container.appendChild(hint);

  const form = document.createElement("form");
  form.className = "predict-form";
  const inputs: HTMLInputElement[] = [];
  for (const name of FEATURE_NAMES) {
    const label = document.createElement("label");
    label.textContent = name;
    const input = document.createElement("input");
    input.type = "text";
    input.name = name;
    input.value = "0";
    label.appendChild(input);
    form.appendChild(label);
    inputs.push(input);
  }

  const controls = document.createElement("div");
  controls.className = "predict-controls";
  const example = document.createElement("button");
  example.type = "button";
  example.textContent = i18n.t("predict_example");
  example.addEventListener("click", () => {
    inputs.forEach((input, i) => {
      input.value = String(EXAMPLE_FEATURES[i]);
    });
  });
  controls.appendChild(example);

  const submit = document.createElement("button");
  submit.type = "submit";
  submit.textContent = i18n.t("predict_submit");
  controls.appendChild(submit);
  form.appendChild(controls);

  const errorBox = document.createElement("p");
  errorBox.className = "error";
  form.appendChild(errorBox);

  form.addEventListener("submit", (ev) => {
    ev.preventDefault();
    errorBox.textContent = "";
    try {
      onSubmit(parseFeatures(inputs.map((input) => input.value)));
    } catch (err) {
      errorBox.textContent = String(err instanceof Error ? err.message : err);
    }
  });
  container.appendChild(form);

  const result = document.createElement("div");
  result.className = "predict-result";
  container.appendChild(result);
}

export function renderPrediction(
  container: HTMLElement,
  response: PredictResponse,
  i18n: I18n,
): void {
  const box = container.querySelector(".predict-result");
  if (!box) return;
  box.textContent = "";
  const label = document.createElement("p");
  label.className = "predicted-label";
  label.textContent = `${i18n.t("predicted_label")}: ${i18n.pick(response.labels.label)}`;
  box.appendChild(label);
  const score = document.createElement("p");
  score.textContent = `${i18n.t("confidence")}: ${(response.score * 100).toFixed(1)}% — ${i18n.t(
    "model_used",
  )}: ${i18n.t("model_" + response.model.name)}`;
  box.appendChild(score);
}
