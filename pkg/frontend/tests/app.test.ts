import { beforeEach, describe, expect, it } from "vitest";

import { Dashboard } from "../src/app.js";
import { DEFAULT_STATE, type ViewState } from "../src/state.js";
import {
  anovaPayload,
  boxplotPayload,
  heatmapPayload,
  learners,
  predictResponse,
} from "./fixtures.js";

class StubApi {
  calls: Record<string, number> = {};

  private count(name: string): void {
    this.calls[name] = (this.calls[name] ?? 0) + 1;
  }

  dataFetches(): number {
    return (
      (this.calls.boxplot ?? 0) +
      (this.calls.anova ?? 0) +
      (this.calls.heatmap ?? 0) +
      (this.calls.predict ?? 0)
    );
  }

  async sessions() {
    this.count("sessions");
    return ["S1"];
  }

  async learners(_session: string) {
    this.count("learners");
    return learners();
  }

  async boxplot() {
    this.count("boxplot");
    return boxplotPayload();
  }

  async anova() {
    this.count("anova");
    return anovaPayload();
  }

  async heatmap() {
    this.count("heatmap");
    return heatmapPayload();
  }

  async predict() {
    this.count("predict");
    return predictResponse();
  }

  async labels() {
    this.count("labels");
    return {
      avg_saccade_rate: {
        en: "Average saccades (per minute)",
        es: "Sacadas medias (por minuto)",
      },
      sex: { en: "Sex", es: "Sexo" },
    };
  }
}

function makeDashboard(overrides: Partial<ViewState> = {}) {
  const root = document.createElement("div");
  document.body.appendChild(root);
  const api = new StubApi();
  const urls: string[] = [];
  const dashboard = new Dashboard(
    root,
    api,
    { ...DEFAULT_STATE, session: "S1", ...overrides },
    (encoded) => urls.push(encoded),
  );
  return { root, api, urls, dashboard };
}

beforeEach(() => {
  document.body.textContent = "";
});

describe("Dashboard", () => {
  it("boots into the box plot view with filters applied", async () => {
    const { root, api, dashboard } = makeDashboard();
    await dashboard.init();
    expect(api.calls.boxplot).toBe(1);
    expect(root.querySelectorAll("g.box")).toHaveLength(2);
    // parameter x activity x factor controls are all present
    for (const name of ["parameter", "activity", "factor"]) {
      expect(root.querySelector(`[data-control="${name}"]`)).not.toBeNull();
    }
  });

  it("refetches when a data filter changes", async () => {
    const { api, dashboard } = makeDashboard();
    await dashboard.init();
    await dashboard.update({ factor: "group" });
    expect(api.calls.boxplot).toBe(2);
    await dashboard.update({ activity: "Video" });
    expect(api.calls.boxplot).toBe(3);
  });

  it("switches locale without any data refetch and swaps every label", async () => {
    const { root, api, dashboard } = makeDashboard();
    await dashboard.init();
    const before = api.dataFetches();
    const englishTexts = ["Box plots", "Heat map", "Prediction", "Female", "Reading"];
    for (const text of englishTexts) {
      expect(root.textContent).toContain(text);
    }
    await dashboard.update({ locale: "es" });
    expect(api.dataFetches()).toBe(before); // presentation-only toggle
    for (const text of ["Diagramas de cajas", "Mapa de calor", "Predicción", "Mujer", "Lectura"]) {
      expect(root.textContent).toContain(text);
    }
    for (const text of ["Box plots", "Female"]) {
      expect(root.textContent).not.toContain(text);
    }
  });

  it("renders the heatmap view with learner/activity/mode selectors", async () => {
    const { root, api, dashboard } = makeDashboard({ view: "heatmap", learner: "P001" });
    await dashboard.init();
    expect(api.calls.heatmap).toBe(1);
    for (const name of ["learner", "heatmapActivity", "mode"]) {
      expect(root.querySelector(`[data-control="${name}"]`)).not.toBeNull();
    }
    expect(root.querySelector("canvas")).not.toBeNull();
    await dashboard.update({ mode: "count" });
    expect(api.calls.heatmap).toBe(2); // weighting is a data change
  });

  it("shows the anova panel with the significance badge", async () => {
    const { root, dashboard } = makeDashboard({ view: "anova" });
    await dashboard.init();
    expect(root.querySelector(".badge-significant")).not.toBeNull();
    expect(root.textContent).toContain("5.4321");
  });

  it("runs the prediction probe through the API", async () => {
    const { root, api, dashboard } = makeDashboard({ view: "predict" });
    await dashboard.init();
    (root.querySelector("button[type=button]") as HTMLButtonElement).click();
    (root.querySelector("form") as HTMLFormElement).dispatchEvent(
      new Event("submit", { bubbles: true, cancelable: true }),
    );
    await Promise.resolve(); // let the predict promise settle
    await Promise.resolve();
    expect(api.calls.predict).toBe(1);
    expect(root.querySelector(".predict-result")?.textContent).toContain("Reading");
  });

  it("keeps the URL-encoded state in sync for sharing", async () => {
    const { urls, dashboard } = makeDashboard();
    await dashboard.init();
    await dashboard.update({ view: "anova", parameter: "avg_fixation_time" });
    const last = urls[urls.length - 1];
    expect(last).toContain("view=anova");
    expect(last).toContain("parameter=avg_fixation_time");
    expect(last).toContain("session=S1");
  });

  it("tab clicks change the view", async () => {
    const { root, api, dashboard } = makeDashboard();
    await dashboard.init();
    (root.querySelector('[data-view="anova"]') as HTMLButtonElement).click();
    await Promise.resolve();
    await Promise.resolve();
    expect(dashboard.state.view).toBe("anova");
    expect(api.calls.anova).toBe(1);
  });

  it("surfaces API failures as a readable banner", async () => {
    const { root, api, dashboard } = makeDashboard();
    api.boxplot = async () => {
      throw new Error("no profiles for activity 'Video'");
    };
    await dashboard.init();
    expect(root.querySelector(".error-banner")?.textContent).toContain("no profiles");
  });
});
