import { describe, expect, it } from "vitest";

import {
  multiSeriesChart,
  weeklyTrendChart,
  type ChartSeries,
} from "../src/charts.js";

function titles(svg: string): string[] {
  return [...svg.matchAll(/<title>([^<]*)<\/title>/g)].map((m) => m[1]!);
}

function circleCount(svg: string): number {
  return (svg.match(/<circle /g) ?? []).length;
}

function polylines(svg: string): string[] {
  return [...svg.matchAll(/<polyline [^>]*points="([^"]*)"/g)].map(
    (m) => m[1]!,
  );
}

function circleYs(svg: string): number[] {
  return [...svg.matchAll(/<circle [^>]*cy="([^"]+)"/g)].map((m) =>
    Number(m[1]),
  );
}

function line(points: (number | null)[], name = "s", color = "#123"): ChartSeries {
  return {
    name,
    color,
    kind: "line",
    points: points.map((value, index) => ({
      label: `P${index}`,
      value,
      title: value === null ? `P${index}: n/a` : `P${index}: ${value}`,
    })),
  };
}

describe("multiSeriesChart", () => {
  it("draws one polyline through a fully applicable series", () => {
    const svg = multiSeriesChart([line([1, 2, 3])]);
    const lines = polylines(svg);
    expect(lines).toHaveLength(1);
    expect(lines[0]!.split(" ")).toHaveLength(3);
    expect(circleCount(svg)).toBe(3);
  });

  it("renders an NA point as a gap: no marker, no zero, split line", () => {
    const svg = multiSeriesChart([line([5, null, 7])]);
    // Only the two applicable points get markers; runs of one draw no line.
    expect(circleCount(svg)).toBe(2);
    expect(polylines(svg)).toHaveLength(0);
    expect(titles(svg)).toEqual(["P0: 5", "P2: 7"]);
    // Nothing readable shows a zero for the NA slot.
    const displayed = [
      ...svg.matchAll(/<(?:text|title)[^>]*>([^<]*)</g),
    ].map((m) => m[1]!);
    expect(displayed.some((text) => /\b0\b/.test(text))).toBe(false);
  });

  it("splits a series into segments around the NA run", () => {
    const svg = multiSeriesChart([line([1, 2, null, 3, 4])]);
    const lines = polylines(svg);
    expect(lines).toHaveLength(2);
    expect(lines[0]!.split(" ")).toHaveLength(2);
    expect(lines[1]!.split(" ")).toHaveLength(2);
    expect(circleCount(svg)).toBe(4);
  });

  it("scales each series to its own axis", () => {
    const low = line([0, 10], "low");
    const high = line([1000, 1010], "high", "#456");
    const svg = multiSeriesChart([low, high]);
    const ys = circleYs(svg);
    // Each series' maximum sits at the same (top) pixel despite the
    // incomparable magnitudes — the axes are independent.
    expect(ys[1]).toBeCloseTo(ys[3]!, 5);
    // And each minimum sits at the bottom of the plot area.
    expect(ys[0]).toBeCloseTo(ys[2]!, 5);
    expect(ys[0]!).toBeGreaterThan(ys[1]!);
  });

  it("states each series' value range verbatim in the legend", () => {
    const svg = multiSeriesChart([
      line([76.19047619047619, 288], "av"),
      line([0.0031160413810295403], "pcr", "#456"),
    ]);
    expect(svg).toContain("av [76.19047619047619 … 288]");
    expect(svg).toContain("pcr [0.0031160413810295403]");
  });

  it("marks an all-NA series as such in the legend", () => {
    const svg = multiSeriesChart([line([1, 2], "ok"), line([null, null], "na")]);
    expect(svg).toContain("na [all n/a]");
    expect(circleCount(svg)).toBe(2);
  });

  it("reports when nothing is plottable", () => {
    expect(multiSeriesChart([])).toContain("no plottable values");
    expect(multiSeriesChart([line([null, null])])).toContain(
      "no plottable values",
    );
  });

  it("draws bar series as rects with their own scale", () => {
    const bars: ChartSeries = {
      name: "effort",
      color: "#789",
      kind: "bars",
      points: [
        { label: "A", value: 120, title: "A: 120 person-days" },
        { label: "B", value: 40, title: "B: 40 person-days" },
      ],
    };
    const svg = multiSeriesChart([line([1, 2]), bars]);
    expect((svg.match(/<rect /g) ?? []).length).toBe(2);
    expect(titles(svg)).toContain("A: 120 person-days");
    expect(titles(svg)).toContain("B: 40 person-days");
  });

  it("labels the x axis from the series' point labels", () => {
    const svg = multiSeriesChart([line([1, 2, 3])]);
    for (const label of ["P0", "P1", "P2"]) {
      expect(svg).toContain(`>${label}</text>`);
    }
  });
});

describe("weeklyTrendChart", () => {
  const entries = [
    { week: "1997-W02", opened: 2, closed: 1, backlog: 3 },
    { week: "1997-W03", opened: 0, closed: 1, backlog: 2 },
  ];

  it("labels every bar with its exact count", () => {
    const svg = weeklyTrendChart(entries);
    const labels = [...svg.matchAll(/class="chart-bar-label">([^<]*)</g)].map(
      (m) => m[1],
    );
    expect(labels).toEqual(["2", "1", "0", "1"]);
  });

  it("titles bars and backlog points with week and count", () => {
    const svg = weeklyTrendChart(entries);
    const all = titles(svg);
    expect(all).toContain("1997-W02 opened: 2");
    expect(all).toContain("1997-W02 closed: 1");
    expect(all).toContain("1997-W02 backlog: 3");
    expect(all).toContain("1997-W03 backlog: 2");
  });

  it("omits the rect but keeps the zero label for an empty bar", () => {
    const svg = weeklyTrendChart([
      { week: "1997-W05", opened: 0, closed: 0, backlog: 1 },
    ]);
    expect((svg.match(/<rect /g) ?? []).length).toBe(0);
    const labels = [...svg.matchAll(/class="chart-bar-label">([^<]*)</g)].map(
      (m) => m[1],
    );
    expect(labels).toEqual(["0", "0"]);
  });

  it("draws the backlog as a line across the weeks", () => {
    const svg = weeklyTrendChart(entries);
    expect(polylines(svg)).toHaveLength(1);
    expect(polylines(svg)[0]!.split(" ")).toHaveLength(2);
  });

  it("reports an empty week range", () => {
    expect(weeklyTrendChart([])).toContain("no weeks in range");
  });

  it("names the week under each slot", () => {
    const svg = weeklyTrendChart(entries);
    expect(svg).toContain(">1997-W02</text>");
    expect(svg).toContain(">1997-W03</text>");
  });
});
