import { describe, expect, it } from "vitest";

import { DEFAULT_STATE, decodeState, encodeState, type ViewState } from "../src/state.js";

describe("view state URL encoding", () => {
  it("round-trips every field", () => {
    const state: ViewState = {
      view: "heatmap",
      locale: "es",
      session: "S1",
      parameter: "avg_fixation_time",
      factor: "group",
      activity: "Video",
      learner: "P007",
      heatmapActivity: "Reading",
      mode: "count",
      api: "http://localhost:9000/api/v1",
    };
    expect(decodeState(encodeState(state))).toEqual(state);
  });

  it("omits defaults so plain views have empty URLs", () => {
    expect(encodeState({ ...DEFAULT_STATE })).toBe("");
  });

  it("fills missing fields with defaults", () => {
    const state = decodeState("view=anova");
    expect(state.view).toBe("anova");
    expect(state.parameter).toBe(DEFAULT_STATE.parameter);
    expect(state.locale).toBe("en");
  });

  it("ignores invalid enum values", () => {
    const state = decodeState("view=pie&locale=fr&mode=area");
    expect(state.view).toBe(DEFAULT_STATE.view);
    expect(state.locale).toBe(DEFAULT_STATE.locale);
    expect(state.mode).toBe(DEFAULT_STATE.mode);
  });

  it("accepts a leading hash", () => {
    expect(decodeState("#view=predict").view).toBe("predict");
  });
});
