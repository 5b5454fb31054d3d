import { describe, expect, it } from "vitest";

import { activityColor, computeLayout, renderBoxplot } from "../src/boxplot.js";
import { I18n } from "../src/i18n.js";
import { boxplotPayload } from "./fixtures.js";

describe("computeLayout", () => {
  it("maps payload numbers linearly onto the pixel axis", () => {
    const layout = computeLayout(boxplotPayload(), 640, 360);
    const female = layout.boxes[0];
    // Pixel y grows downward, so larger values sit higher.
    expect(female.whiskerHighY).toBeLessThan(female.medianY);
    expect(female.medianY).toBeLessThan(female.whiskerLowY);
    expect(female.q3Y).toBeLessThan(female.q1Y);
    // Median at 12 lies midway between q1=10 and q3=14 on a linear scale.
    const mid = (female.q1Y + female.q3Y) / 2;
    expect(Math.abs(female.medianY - mid)).toBeLessThan(1e-9);
    // The scale is shared: equal values land on the same y across series.
    expect(layout.toY(12)).toBeCloseTo(female.medianY, 9);
  });

  it("covers outliers in the value extent", () => {
    const layout = computeLayout(boxplotPayload(), 640, 360);
    const outlierY = layout.boxes[0].outlierYs[0];
    expect(outlierY).toBeGreaterThanOrEqual(layout.plotTop);
    expect(outlierY).toBeLessThan(layout.boxes[0].whiskerHighY);
  });

  it("positions one box per population", () => {
    const layout = computeLayout(boxplotPayload());
    expect(layout.boxes.map((b) => b.level)).toEqual(["F", "M"]);
    expect(layout.boxes[0].cx).toBeLessThan(layout.boxes[1].cx);
  });

  it("survives a degenerate flat series", () => {
    const payload = boxplotPayload();
    payload.series = [
      {
        level: "F",
        labels: { en: "Female", es: "Mujer" },
        n: 2,
        median: 5,
        q1: 5,
        q3: 5,
        whisker_low: 5,
        whisker_high: 5,
        outliers: [],
      },
    ];
    const layout = computeLayout(payload);
    expect(Number.isFinite(layout.boxes[0].medianY)).toBe(true);
  });
});

describe("renderBoxplot", () => {
  it("renders a box group per series with labels and counts", () => {
    const container = document.createElement("div");
    renderBoxplot(container, boxplotPayload(), new I18n("en"));
    const groups = container.querySelectorAll("g.box");
    expect(groups).toHaveLength(2);
    expect(container.textContent).toContain("Female");
    expect(container.textContent).toContain("n=6");
    expect(container.querySelectorAll("circle.outlier")).toHaveLength(1);
  });

  it("uses the activity color for boxes and legend", () => {
    const container = document.createElement("div");
    renderBoxplot(container, boxplotPayload(), new I18n("en"));
    const rect = container.querySelector("rect.iqr-box");
    expect(rect?.getAttribute("fill")).toBe(activityColor("Reading"));
    expect(container.querySelector(".legend")?.textContent).toContain("Reading");
  });

  it("re-labels in spanish from the same payload (no refetch needed)", () => {
    const container = document.createElement("div");
    const payload = boxplotPayload();
    renderBoxplot(container, payload, new I18n("en"));
    expect(container.textContent).toContain("Average saccades");
    renderBoxplot(container, payload, new I18n("es"));
    expect(container.textContent).toContain("Sacadas medias");
    expect(container.textContent).toContain("Mujer");
    expect(container.textContent).not.toContain("Female");
  });
});
