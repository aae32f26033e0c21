// Hand-rolled SVG charts as pure string builders.
//
// Coordinates inside attributes are layout only; the numbers a user can
// actually read — legend ranges, bar labels, hover titles — are payload
// values passed through verbatim by the caller.  A point with a null value
// is not applicable and renders as a gap: line segments break around it and
// no marker is drawn, so an NA never masquerades as a zero.

import { escapeHtml, showNumber } from "./format.js";

export interface ChartPoint {
  /** X-axis label (release version, week id, ...). */
  label: string;
  /** Payload value, or null for a not-applicable gap. */
  value: number | null;
  /** Hover text; built by the caller from payload fields. */
  title: string;
}

export interface ChartSeries {
  name: string;
  color: string;
  kind: "line" | "bars";
  points: ChartPoint[];
}

const WIDTH = 720;
const HEIGHT = 240;
const MARGIN = { top: 18, right: 16, bottom: 34, left: 16 };

function coord(value: number): string {
  return value.toFixed(2);
}

interface Scale {
  min: number;
  max: number;
}

/** Pick the smallest and largest applicable values; null when all are NA. */
function seriesScale(series: ChartSeries): Scale | null {
  let min: number | null = null;
  let max: number | null = null;
  for (const point of series.points) {
    if (point.value === null) {
      continue;
    }
    if (min === null || point.value < min) {
      min = point.value;
    }
    if (max === null || point.value > max) {
      max = point.value;
    }
  }
  return min === null || max === null ? null : { min, max };
}

function yFor(value: number, scale: Scale): number {
  const innerHeight = HEIGHT - MARGIN.top - MARGIN.bottom;
  if (scale.max === scale.min) {
    return MARGIN.top + innerHeight / 2;
  }
  const fraction = (value - scale.min) / (scale.max - scale.min);
  return MARGIN.top + (1 - fraction) * innerHeight;
}

function slotCenter(index: number, slots: number): number {
  const innerWidth = WIDTH - MARGIN.left - MARGIN.right;
  return MARGIN.left + ((index + 0.5) * innerWidth) / slots;
}

function renderLineSeries(series: ChartSeries, scale: Scale, slots: number): string {
  const parts: string[] = [];
  // Consecutive applicable points form segments; an NA breaks the run.
  let run: string[] = [];
  const flush = () => {
    if (run.length >= 2) {
      parts.push(
        `<polyline fill="none" stroke="${series.color}" stroke-width="2" ` +
          `points="${run.join(" ")}"/>`,
      );
    }
    run = [];
  };
  series.points.forEach((point, index) => {
    if (point.value === null) {
      flush();
      return;
    }
    const x = slotCenter(index, slots);
    const y = yFor(point.value, scale);
    run.push(`${coord(x)},${coord(y)}`);
    parts.push(
      `<circle cx="${coord(x)}" cy="${coord(y)}" r="3.5" fill="${series.color}">` +
        `<title>${escapeHtml(point.title)}</title></circle>`,
    );
  });
  flush();
  return parts.join("");
}

function renderBarSeries(
  series: ChartSeries,
  scale: Scale,
  slots: number,
  lane: number,
  lanes: number,
): string {
  const innerWidth = WIDTH - MARGIN.left - MARGIN.right;
  const slotWidth = innerWidth / slots;
  const barWidth = Math.max(2, (slotWidth * 0.6) / lanes);
  const baseline = HEIGHT - MARGIN.bottom;
  const parts: string[] = [];
  series.points.forEach((point, index) => {
    if (point.value === null) {
      return;
    }
    const center = slotCenter(index, slots);
    const x = center - (barWidth * lanes) / 2 + lane * barWidth;
    const top = yFor(point.value, scale);
    const height = Math.max(1, baseline - top);
    parts.push(
      `<rect x="${coord(x)}" y="${coord(baseline - height)}" ` +
        `width="${coord(barWidth)}" height="${coord(height)}" ` +
        `fill="${series.color}" opacity="0.55">` +
        `<title>${escapeHtml(point.title)}</title></rect>`,
    );
  });
  return parts.join("");
}

/**
 * Plot several series over a shared x-axis, each scaled to its own range so
 * indicators with incomparable units can be overlaid.  The legend states each
 * series' range using the exact payload values that bound it.
 */
export function multiSeriesChart(seriesList: ChartSeries[]): string {
  const slots = Math.max(...seriesList.map((s) => s.points.length), 0);
  const scales = seriesList.map(seriesScale);
  if (slots === 0 || scales.every((scale) => scale === null)) {
    return '<p class="chart-empty">no plottable values</p>';
  }
  const baseline = HEIGHT - MARGIN.bottom;
  const parts: string[] = [
    `<svg class="chart" viewBox="0 0 ${WIDTH} ${HEIGHT}" role="img">`,
    `<line x1="${coord(MARGIN.left)}" y1="${coord(baseline)}" ` +
      `x2="${coord(WIDTH - MARGIN.right)}" y2="${coord(baseline)}" ` +
      `stroke="#8a93a6" stroke-width="1"/>`,
  ];
  const barLanes = seriesList.filter((s) => s.kind === "bars").length;
  let lane = 0;
  seriesList.forEach((series, seriesIndex) => {
    const scale = scales[seriesIndex] ?? null;
    if (scale === null || series.points.length === 0) {
      return;
    }
    if (series.kind === "bars") {
      parts.push(renderBarSeries(series, scale, slots, lane, Math.max(1, barLanes)));
      lane += 1;
    } else {
      parts.push(renderLineSeries(series, scale, slots));
    }
  });
  // X labels come from the longest series so every slot is named.
  const labelSource = seriesList.find((s) => s.points.length === slots);
  if (labelSource !== undefined) {
    labelSource.points.forEach((point, index) => {
      const x = slotCenter(index, slots);
      parts.push(
        `<text x="${coord(x)}" y="${coord(HEIGHT - MARGIN.bottom + 14)}" ` +
          `text-anchor="middle" class="chart-x-label">` +
          `${escapeHtml(point.label)}</text>`,
      );
    });
  }
  parts.push("</svg>");
  const legend = seriesList
    .map((series, index) => {
      const scale = scales[index] ?? null;
      const range =
        scale === null
          ? "all n/a"
          : scale.min === scale.max
            ? showNumber(scale.min)
            : `${showNumber(scale.min)} … ${showNumber(scale.max)}`;
      return (
        `<span class="legend-entry"><span class="legend-swatch" ` +
        `style="background:${series.color}"></span>` +
        `${escapeHtml(series.name)} [${escapeHtml(range)}]</span>`
      );
    })
    .join(" ");
  return `<div class="legend">${legend}</div>${parts.join("")}`;
}

export interface WeeklyBarsEntry {
  week: string;
  opened: number;
  closed: number;
  backlog: number;
}

/**
 * Opened/closed bars per week with the backlog drawn as a line over them,
 * all three sharing one scale.  Each bar is labelled with its exact count.
 */
export function weeklyTrendChart(entries: WeeklyBarsEntry[]): string {
  if (entries.length === 0) {
    return '<p class="chart-empty">no weeks in range</p>';
  }
  const top = Math.max(
    ...entries.map((e) => Math.max(e.opened, e.closed, e.backlog)),
    1,
  );
  const scale: Scale = { min: 0, max: top };
  const slots = entries.length;
  const innerWidth = WIDTH - MARGIN.left - MARGIN.right;
  const barWidth = Math.max(3, (innerWidth / slots) * 0.3);
  const baseline = HEIGHT - MARGIN.bottom;
  const parts: string[] = [
    `<svg class="chart" viewBox="0 0 ${WIDTH} ${HEIGHT}" role="img">`,
    `<line x1="${coord(MARGIN.left)}" y1="${coord(baseline)}" ` +
      `x2="${coord(WIDTH - MARGIN.right)}" y2="${coord(baseline)}" ` +
      `stroke="#8a93a6" stroke-width="1"/>`,
  ];
  const bar = (
    x: number,
    value: number,
    color: string,
    title: string,
  ): string => {
    const height = value === 0 ? 0 : Math.max(1, baseline - yFor(value, scale));
    const label =
      `<text x="${coord(x + barWidth / 2)}" y="${coord(baseline - height - 4)}" ` +
      `text-anchor="middle" class="chart-bar-label">${showNumber(value)}</text>`;
    if (height === 0) {
      return label;
    }
    return (
      `<rect x="${coord(x)}" y="${coord(baseline - height)}" ` +
      `width="${coord(barWidth)}" height="${coord(height)}" fill="${color}">` +
      `<title>${escapeHtml(title)}</title></rect>` + label
    );
  };
  const backlogPoints: string[] = [];
  entries.forEach((entry, index) => {
    const center = slotCenter(index, slots);
    parts.push(
      bar(
        center - barWidth - 1,
        entry.opened,
        "#2b6cb0",
        `${entry.week} opened: ${showNumber(entry.opened)}`,
      ),
    );
    parts.push(
      bar(
        center + 1,
        entry.closed,
        "#2f855a",
        `${entry.week} closed: ${showNumber(entry.closed)}`,
      ),
    );
    const backlogY = yFor(entry.backlog, scale);
    backlogPoints.push(`${coord(center)},${coord(backlogY)}`);
    parts.push(
      `<circle cx="${coord(center)}" cy="${coord(backlogY)}" r="3" fill="#c05621">` +
        `<title>${entry.week} backlog: ${showNumber(entry.backlog)}</title></circle>`,
    );
    parts.push(
      `<text x="${coord(center)}" y="${coord(HEIGHT - MARGIN.bottom + 14)}" ` +
        `text-anchor="middle" class="chart-x-label">${escapeHtml(entry.week)}</text>`,
    );
  });
  if (backlogPoints.length >= 2) {
    parts.push(
      `<polyline fill="none" stroke="#c05621" stroke-width="2" ` +
        `points="${backlogPoints.join(" ")}"/>`,
    );
  }
  parts.push("</svg>");
  const legend =
    '<div class="legend">' +
    '<span class="legend-entry"><span class="legend-swatch" style="background:#2b6cb0"></span>opened</span> ' +
    '<span class="legend-entry"><span class="legend-swatch" style="background:#2f855a"></span>closed</span> ' +
    '<span class="legend-entry"><span class="legend-swatch" style="background:#c05621"></span>backlog</span>' +
    "</div>";
  return legend + parts.join("");
}
