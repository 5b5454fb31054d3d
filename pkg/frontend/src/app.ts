/**
 * Dashboard shell: tab navigation, filter controls, URL-encoded state, and
 * the EN/ES toggle. Data payloads are cached per view so switching locale
 * re-labels everything without touching the network.
 */

import {
  ApiClient,
  type AnovaPayload,
  type BoxplotPayload,
  type HeatmapPayload,
  type LearnerInfo,
} from "./api.js";
import { renderAnova } from "./anova.js";
import { renderBoxplot } from "./boxplot.js";
import { renderHeatmapView } from "./heatmapView.js";
import { I18n, type Locale } from "./i18n.js";
import { renderPredictForm, renderPrediction } from "./predict.js";
import { DEFAULT_STATE, decodeState, encodeState, type ViewName, type ViewState } from "./state.js";

export const PARAMETERS = [
  "avg_saccade_rate",
  "avg_fixation_rate",
  "avg_saccade_time",
  "avg_fixation_time",
];
export const FACTORS = ["sex", "group", "html_level"];
export const ACTIVITIES = ["WholeSession", "Video", "Reading", "Assignment"];
export const HEATMAP_ACTIVITIES = ["all", "Video", "Reading", "Assignment"];

interface ApiLike {
  sessions(): Promise<string[]>;
  learners(session: string): Promise<LearnerInfo[]>;
  boxplot(session: string, parameter: string, activity: string, factor: string): Promise<BoxplotPayload>;
  anova(session: string, parameter: string, factor: string, activity: string): Promise<AnovaPayload>;
  heatmap(session: string, learner: string, activity: string, mode: string): Promise<HeatmapPayload>;
  predict(features: number[]): Promise<import("./api.js").PredictResponse>;
  labels(): Promise<Record<string, { en: string; es: string }>>;
}

export class Dashboard {
  state: ViewState;
  readonly i18n: I18n;
  private readonly root: HTMLElement;
  private readonly api: ApiLike;
  private readonly onStateChange: (encoded: string) => void;
  private learners: LearnerInfo[] = [];
  private sessions: string[] = [];
  private cache: {
    boxplot?: BoxplotPayload;
    anova?: AnovaPayload;
    heatmap?: HeatmapPayload;
    prediction?: import("./api.js").PredictResponse;
  } = {};

  constructor(
    root: HTMLElement,
    api: ApiLike,
    initial: ViewState,
    onStateChange: (encoded: string) => void = () => {},
  ) {
    this.root = root;
    this.api = api;
    this.state = { ...initial };
    this.i18n = new I18n(initial.locale);
    this.onStateChange = onStateChange;
  }

  async init(): Promise<void> {
    try {
      this.i18n.addServerCatalog(await this.api.labels());
    } catch {
      /* server catalog is additive; the UI catalog always exists */
    }
    this.sessions = await this.api.sessions();
    if (!this.state.session && this.sessions.length > 0) {
      this.state.session = this.sessions[0];
    }
    if (this.state.session) {
      this.learners = await this.api.learners(this.state.session);
      if (!this.state.learner && this.learners.length > 0) {
        this.state.learner = this.learners[0].participant_id;
      }
    }
    this.renderChrome();
    await this.refreshView();
  }

  /** Update filters; data-bearing changes refetch, locale never does. */
  async update(partial: Partial<ViewState>): Promise<void> {
    const before = this.state;
    this.state = { ...before, ...partial };
    this.onStateChange(encodeState(this.state));
    if (partial.locale !== undefined && partial.locale !== before.locale) {
      this.i18n.locale = partial.locale as Locale;
      this.renderChrome();
      this.renderActiveFromCache();
      return;
    }
    if (partial.session !== undefined && partial.session !== before.session) {
      this.learners = await this.api.learners(this.state.session);
      if (this.learners.length > 0) this.state.learner = this.learners[0].participant_id;
      this.cache = {};
    }
    this.renderChrome();
    await this.refreshView();
  }

  viewBody(): HTMLElement {
    return this.root.querySelector(".view-body") as HTMLElement;
  }

  private option(value: string, text: string, selected: boolean): HTMLOptionElement {
    const el = document.createElement("option");
    el.value = value;
    el.textContent = text;
    el.selected = selected;
    return el;
  }

  private select(
    name: string,
    labelKey: string,
    options: { value: string; text: string }[],
    current: string,
    onChange: (value: string) => void,
  ): HTMLElement {
    const wrap = document.createElement("label");
    wrap.className = "control";
    wrap.dataset.control = name;
    const caption = document.createElement("span");
    caption.textContent = this.i18n.t(labelKey);
    wrap.appendChild(caption);
    const select = document.createElement("select");
    select.name = name;
    for (const opt of options) {
      select.appendChild(this.option(opt.value, opt.text, opt.value === current));
    }
    select.addEventListener("change", () => onChange(select.value));
    wrap.appendChild(select);
    return wrap;
  }

  renderChrome(): void {
    const t = (key: string) => this.i18n.t(key);
    this.root.textContent = "";

    const header = document.createElement("header");
    const title = document.createElement("h1");
    title.textContent = t("app_title");
    header.appendChild(title);

    const localeToggle = document.createElement("button");
    localeToggle.className = "locale-toggle";
    localeToggle.textContent = this.state.locale === "en" ? "ES" : "EN";
    localeToggle.title = t("language");
    localeToggle.addEventListener("click", () => {
      void this.update({ locale: this.state.locale === "en" ? "es" : "en" });
    });
    header.appendChild(localeToggle);
    this.root.appendChild(header);

    const tabs = document.createElement("nav");
    tabs.className = "tabs";
    const tabDefs: [ViewName, string][] = [
      ["boxplot", "tab_boxplot"],
      ["heatmap", "tab_heatmap"],
      ["anova", "tab_anova"],
      ["predict", "tab_predict"],
    ];
    for (const [view, key] of tabDefs) {
      const tab = document.createElement("button");
      tab.className = view === this.state.view ? "tab active" : "tab";
      tab.dataset.view = view;
      tab.textContent = t(key);
      tab.addEventListener("click", () => void this.update({ view }));
      tabs.appendChild(tab);
    }
    this.root.appendChild(tabs);

    const controls = document.createElement("div");
    controls.className = "controls";
    controls.appendChild(
      this.select(
        "session",
        "session",
        this.sessions.map((s) => ({ value: s, text: s })),
        this.state.session,
        (value) => void this.update({ session: value }),
      ),
    );
    const paramOptions = PARAMETERS.map((p) => ({ value: p, text: this.i18n.t(p) }));
    const factorOptions = [{ value: "", text: t("no_factor") }].concat(
      FACTORS.map((f) => ({ value: f, text: this.i18n.t(f) })),
    );
    const activityOptions = ACTIVITIES.map((a) => ({ value: a, text: this.i18n.t(a) }));

    if (this.state.view === "boxplot") {
      controls.appendChild(
        this.select("parameter", "parameter", paramOptions, this.state.parameter, (v) =>
          void this.update({ parameter: v }),
        ),
      );
      controls.appendChild(
        this.select("activity", "activity", activityOptions, this.state.activity, (v) =>
          void this.update({ activity: v }),
        ),
      );
      controls.appendChild(
        this.select("factor", "factor", factorOptions, this.state.factor, (v) =>
          void this.update({ factor: v }),
        ),
      );
    } else if (this.state.view === "anova") {
      controls.appendChild(
        this.select("parameter", "parameter", paramOptions, this.state.parameter, (v) =>
          void this.update({ parameter: v }),
        ),
      );
      controls.appendChild(
        this.select("activity", "activity", activityOptions, this.state.activity, (v) =>
          void this.update({ activity: v }),
        ),
      );
      const anovaFactor = this.state.factor || "sex";
      controls.appendChild(
        this.select(
          "factor",
          "factor",
          FACTORS.map((f) => ({ value: f, text: this.i18n.t(f) })),
          anovaFactor,
          (v) => void this.update({ factor: v }),
        ),
      );
    } else if (this.state.view === "heatmap") {
      controls.appendChild(
        this.select(
          "learner",
          "learner",
          this.learners.map((l) => ({ value: l.participant_id, text: l.participant_id })),
          this.state.learner,
          (v) => void this.update({ learner: v }),
        ),
      );
      controls.appendChild(
        this.select(
          "heatmapActivity",
          "activity",
          HEATMAP_ACTIVITIES.map((a) => ({
            value: a,
            text: a === "all" ? this.i18n.t("all_activities") : this.i18n.t(a),
          })),
          this.state.heatmapActivity,
          (v) => void this.update({ heatmapActivity: v }),
        ),
      );
      controls.appendChild(
        this.select(
          "mode",
          "weight_mode",
          [
            { value: "duration", text: t("mode_duration") },
            { value: "count", text: t("mode_count") },
          ],
          this.state.mode,
          (v) => void this.update({ mode: v as ViewState["mode"] }),
        ),
      );
    }
    this.root.appendChild(controls);

    const body = document.createElement("main");
    body.className = "view-body";
    this.root.appendChild(body);

    const footer = document.createElement("footer");
    footer.textContent = t("share_hint");
    this.root.appendChild(footer);
  }

  /** Fetch the active view's payload and render it. */
  async refreshView(): Promise<void> {
    const body = this.viewBody();
    if (this.state.view === "predict") {
      this.renderPredictView();
      return;
    }
    if (!this.state.session) {
      body.textContent = this.i18n.t("loading");
      return;
    }
    body.textContent = this.i18n.t("loading");
    try {
      if (this.state.view === "boxplot") {
        this.cache.boxplot = await this.api.boxplot(
          this.state.session,
          this.state.parameter,
          this.state.activity,
          this.state.factor,
        );
      } else if (this.state.view === "anova") {
        this.cache.anova = await this.api.anova(
          this.state.session,
          this.state.parameter,
          this.state.factor || "sex",
          this.state.activity,
        );
      } else if (this.state.view === "heatmap") {
        this.cache.heatmap = await this.api.heatmap(
          this.state.session,
          this.state.learner,
          this.state.heatmapActivity,
          this.state.mode,
        );
      }
    } catch (err) {
      body.textContent = "";
      const banner = document.createElement("p");
      banner.className = "error-banner";
      banner.textContent = `${this.i18n.t("load_failed")}: ${err instanceof Error ? err.message : err}`;
      body.appendChild(banner);
      return;
    }
    this.renderActiveFromCache();
  }

  /** Redraw the active view from cached payloads (locale toggles land here). */
  renderActiveFromCache(): void {
    const body = this.viewBody();
    if (this.state.view === "boxplot" && this.cache.boxplot) {
      renderBoxplot(body, this.cache.boxplot, this.i18n);
    } else if (this.state.view === "anova" && this.cache.anova) {
      renderAnova(body, this.cache.anova, this.i18n);
    } else if (this.state.view === "heatmap" && this.cache.heatmap) {
      renderHeatmapView(body, this.cache.heatmap, this.i18n);
    } else if (this.state.view === "predict") {
      this.renderPredictView();
    }
  }

  private renderPredictView(): void {
    const body = this.viewBody();
    renderPredictForm(body, this.i18n, (features) => {
      void this.api.predict(features).then(
        (response) => {
          this.cache.prediction = response;
          renderPrediction(body, response, this.i18n);
        },
        (err) => {
          const box = body.querySelector(".predict-result");
          if (box) box.textContent = `${this.i18n.t("load_failed")}: ${err}`;
        },
      );
    });
    if (this.cache.prediction) {
      renderPrediction(body, this.cache.prediction, this.i18n);
    }
  }
}

/** Browser bootstrap: bind the dashboard to #app and the location hash. */
export function mount(): void {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app element");
  const state = decodeState(window.location.hash);
  const api = new ApiClient(state.api);
  const dashboard = new Dashboard(root, api, state, (encoded) => {
    const next = encoded ? `#${encoded}` : "";
    if (window.location.hash !== next) {
      history.replaceState(null, "", next || window.location.pathname);
    }
  });
  window.addEventListener("hashchange", () => {
    const incoming = decodeState(window.location.hash);
    if (encodeState(incoming) !== encodeState(dashboard.state)) {
      void dashboard.update(incoming);
    }
  });
  void dashboard.init();
}

export { DEFAULT_STATE };
