// Panel renderers: payloads in, HTML strings out.
//
// Each function renders one region of the dashboard from already-fetched
// payloads and the current view state.  They are pure so the display rules —
// NA cells never become zeros, every number is a payload field rendered
// verbatim — can be asserted directly on their output.

import type { ApiError } from "./api.js";
import {
  multiSeriesChart,
  weeklyTrendChart,
  type ChartSeries,
} from "./charts.js";
import { escapeHtml, naLabel, showNumber } from "./format.js";
import {
  INDICATOR_NAMES,
  SEVERITY_ORDER,
  STAT_OPERATIONS,
  SERIES_NAMES,
  isApplicable,
  type BoardAnomaly,
  type BoardPayload,
  type ReleaseRow,
  type SeriesPayload,
  type SeriesPoint,
  type StatPayload,
  type WeeklyPayload,
} from "./payloads.js";
import type { ViewState } from "./viewstate.js";

const SERIES_COLORS = [
  "#2b6cb0",
  "#c05621",
  "#2f855a",
  "#6b46c1",
  "#b83280",
  "#975a16",
];

const EFFORT_COLORS = { dev: "#a0aec0", test: "#718096" };
const CHANGE_RATE_COLOR = "#805ad5";

// --- errors -----------------------------------------------------------------

/** Remediation hint for stats rejections the user can fix by re-selecting. */
export function statsHint(code: string): string | null {
  switch (code) {
    case "ConstantSeries":
      return (
        "the selected series has no variation under the current filter — " +
        "pick a different series or widen the component filter"
      );
    case "TooFewPoints":
      return (
        "fewer than two releases contribute usable values — " +
        "clear the component filter or choose a series with more data"
      );
    default:
      return null;
  }
}

/** Inline error box carrying the API error code. */
export function renderErrorBox(error: ApiError): string {
  const hint = statsHint(error.code);
  const hintHtml =
    hint === null ? "" : `<p class="error-hint">${escapeHtml(hint)}</p>`;
  return (
    `<div class="error-box"><code>${escapeHtml(error.code)}</code> ` +
    `${escapeHtml(error.message)}${hintHtml}</div>`
  );
}

// --- controls ---------------------------------------------------------------

function option(value: string, label: string, selected: boolean): string {
  return (
    `<option value="${escapeHtml(value)}"${selected ? " selected" : ""}>` +
    `${escapeHtml(label)}</option>`
  );
}

function releaseOptions(
  releases: ReleaseRow[],
  selected: string | null,
  placeholder: string,
): string {
  const options = [option("", placeholder, selected === null)];
  for (const release of releases) {
    options.push(
      option(
        release.release_id,
        `${release.release_id} (${release.component} ${release.version})`,
        release.release_id === selected,
      ),
    );
  }
  return options.join("");
}

/**
 * Filter and chart controls.  The indicator list is generated from the
 * canonical names only, so nothing else is selectable.
 */
export function renderControls(
  releases: ReleaseRow[],
  state: ViewState,
): string {
  const components = [...new Set(releases.map((r) => r.component))].sort();
  const componentOptions = [
    option("", "all components", state.component === null),
    ...components.map((name) => option(name, name, name === state.component)),
  ].join("");
  const indicatorOptions = INDICATOR_NAMES.map((name) =>
    option(name, name, state.indicators.includes(name)),
  ).join("");
  return `
    <label>component
      <select id="control-component">${componentOptions}</select>
    </label>
    <label>indicators
      <select id="control-indicators" multiple size="6">${indicatorOptions}</select>
    </label>
    <label>from release
      <select id="control-from">${releaseOptions(releases, state.releaseFrom, "first")}</select>
    </label>
    <label>to release
      <select id="control-to">${releaseOptions(releases, state.releaseTo, "last")}</select>
    </label>
    <label class="checkbox"><input type="checkbox" id="control-effort"${state.overlayEffort ? " checked" : ""}> effort overlay</label>
    <label class="checkbox"><input type="checkbox" id="control-change"${state.overlayChangeRate ? " checked" : ""}> change-rate overlay</label>
  `;
}

// --- series explorer --------------------------------------------------------

/**
 * Restrict date-ordered points to the inclusive [from, to] release window.
 * Unknown bounds are ignored so a stale URL still renders.
 */
export function sliceReleaseRange<T extends { release_id: string }>(
  points: T[],
  from: string | null,
  to: string | null,
): T[] {
  let start = 0;
  let end = points.length - 1;
  if (from !== null) {
    const index = points.findIndex((p) => p.release_id === from);
    if (index >= 0) {
      start = index;
    }
  }
  if (to !== null) {
    const index = points.findIndex((p) => p.release_id === to);
    if (index >= 0) {
      end = index;
    }
  }
  return start > end ? [] : points.slice(start, end + 1);
}

function seriesToChart(
  payload: SeriesPayload,
  points: SeriesPoint[],
  color: string,
): ChartSeries {
  return {
    name: `${payload.indicator} (${payload.unit})`,
    color,
    kind: "line",
    points: points.map((point) => ({
      label: point.version,
      value: isApplicable(point) ? point.value : null,
      title: isApplicable(point)
        ? `${point.release_id} ${point.version}: ${showNumber(point.value)} ${payload.unit}`
        : `${point.release_id} ${point.version}: ${naLabel(point.not_applicable)}`,
    })),
  };
}

function effortOverlays(
  releases: ReleaseRow[],
  window: SeriesPoint[],
): ChartSeries[] {
  const byId = new Map(releases.map((r) => [r.release_id, r]));
  const rows = window
    .map((point) => byId.get(point.release_id))
    .filter((row): row is ReleaseRow => row !== undefined);
  const bars = (
    name: string,
    color: string,
    pick: (row: ReleaseRow) => number,
  ): ChartSeries => ({
    name,
    color,
    kind: "bars",
    points: rows.map((row) => ({
      label: row.version,
      value: pick(row),
      title: `${row.release_id} ${row.version}: ${showNumber(pick(row))} person-days`,
    })),
  });
  return [
    bars("dev effort (person-days)", EFFORT_COLORS.dev, (r) => r.dev_effort_pd),
    bars("test effort (person-days)", EFFORT_COLORS.test, (r) => r.test_effort_pd),
  ];
}

export interface SeriesExplorerView {
  payloads: SeriesPayload[];
  releases: ReleaseRow[];
  changeRate: SeriesPayload | null;
  state: ViewState;
  error: ApiError | null;
}

/**
 * Chart plus value table for the selected indicators.  Each indicator keeps
 * its own axis; the table shows the same payload values cell for cell, with
 * NA reasons spelled out instead of numbers.
 */
export function renderSeriesExplorer(view: SeriesExplorerView): string {
  if (view.error !== null) {
    return renderErrorBox(view.error);
  }
  if (view.payloads.length === 0) {
    return '<p class="chart-empty">no indicator selected</p>';
  }
  const { releaseFrom, releaseTo } = view.state;
  const windows = view.payloads.map((payload) =>
    sliceReleaseRange(payload.points, releaseFrom, releaseTo),
  );
  const chartSeries: ChartSeries[] = view.payloads.map((payload, index) =>
    seriesToChart(
      payload,
      windows[index] ?? [],
      SERIES_COLORS[index % SERIES_COLORS.length] ?? SERIES_COLORS[0]!,
    ),
  );
  const firstWindow = windows[0] ?? [];
  if (view.state.overlayEffort) {
    chartSeries.push(...effortOverlays(view.releases, firstWindow));
  }
  if (view.changeRate !== null) {
    const window = sliceReleaseRange(
      view.changeRate.points,
      releaseFrom,
      releaseTo,
    );
    chartSeries.push(seriesToChart(view.changeRate, window, CHANGE_RATE_COLOR));
  }
  const header = view.payloads
    .map(
      (payload) =>
        `<th>${escapeHtml(payload.indicator)} ` +
        `<span class="unit">(${escapeHtml(payload.unit)})</span></th>`,
    )
    .join("");
  const rows = firstWindow
    .map((point, rowIndex) => {
      const cells = view.payloads
        .map((_, seriesIndex) => {
          const cell = (windows[seriesIndex] ?? [])[rowIndex];
          if (cell === undefined) {
            return "<td></td>";
          }
          return isApplicable(cell)
            ? `<td class="num">${showNumber(cell.value)}</td>`
            : `<td class="na">${escapeHtml(naLabel(cell.not_applicable))}</td>`;
        })
        .join("");
      return (
        `<tr><td>${escapeHtml(point.release_id)}</td>` +
        `<td>${escapeHtml(point.version)}</td>` +
        `<td>${escapeHtml(point.released_at)}</td>${cells}</tr>`
      );
    })
    .join("");
  const asOf = view.payloads[0]?.as_of ?? "";
  return `
    ${multiSeriesChart(chartSeries)}
    <table class="value-table">
      <thead><tr><th>release</th><th>version</th><th>released</th>${header}</tr></thead>
      <tbody>${rows}</tbody>
    </table>
    <p class="as-of">as of ${escapeHtml(asOf)}</p>
  `;
}

// --- weekly board -----------------------------------------------------------

function severityRows(opened: Record<string, number>): string {
  const known: readonly string[] = SEVERITY_ORDER;
  const names = [
    ...known.filter((name) => name in opened),
    ...Object.keys(opened)
      .filter((name) => !known.includes(name))
      .sort(),
  ];
  if (names.length === 0) {
    return '<tr><td colspan="2" class="na">no anomalies opened</td></tr>';
  }
  return names
    .map(
      (name) =>
        `<tr><td>${escapeHtml(name)}</td>` +
        `<td class="num">${showNumber(opened[name] ?? 0)}</td></tr>`,
    )
    .join("");
}

function boardTable(title: string, entries: BoardAnomaly[]): string {
  const rows =
    entries.length === 0
      ? '<tr><td colspan="7" class="na">none</td></tr>'
      : entries
          .map(
            (entry) =>
              `<tr><td>${escapeHtml(entry.anomaly_id)}</td>` +
              `<td>${escapeHtml(entry.release_id)}</td>` +
              `<td>${escapeHtml(entry.severity)}</td>` +
              `<td>${escapeHtml(entry.environment)}</td>` +
              `<td>${escapeHtml(entry.opened_at)}</td>` +
              `<td class="num">${showNumber(entry.age_hours)}</td>` +
              `<td>${escapeHtml(entry.title)}</td></tr>`,
          )
          .join("");
  return `
    <h3>${escapeHtml(title)}</h3>
    <table class="board-table">
      <thead><tr><th>anomaly</th><th>release</th><th>severity</th>
      <th>environment</th><th>opened</th><th>age (hours)</th><th>title</th></tr></thead>
      <tbody>${rows}</tbody>
    </table>
  `;
}

export interface WeeklyBoardView {
  weekly: WeeklyPayload | null;
  board: BoardPayload | null;
  error: ApiError | null;
}

/**
 * Weekly opened/closed/backlog chart with a per-week severity drill-down,
 * followed by the open-anomalies board.  All counts are payload fields.
 */
export function renderWeeklyBoard(view: WeeklyBoardView): string {
  if (view.error !== null) {
    return renderErrorBox(view.error);
  }
  const parts: string[] = [];
  if (view.weekly !== null) {
    const entries = view.weekly.weeks.map((week) => ({
      week: week.week,
      opened: week.overall.opened,
      closed: week.overall.closed,
      backlog: week.overall.backlog,
    }));
    parts.push(weeklyTrendChart(entries));
    const details = view.weekly.weeks
      .map(
        (week) => `
        <details class="week-detail" data-week="${escapeHtml(week.week)}">
          <summary>${escapeHtml(week.week)} — opened ${showNumber(week.overall.opened)},
          closed ${showNumber(week.overall.closed)},
          backlog ${showNumber(week.overall.backlog)}</summary>
          <table class="severity-table">
            <thead><tr><th>severity</th><th>opened</th></tr></thead>
            <tbody>${severityRows(week.severity_opened)}</tbody>
          </table>
        </details>`,
      )
      .join("");
    parts.push(`<div class="week-details">${details}</div>`);
  }
  if (view.board !== null) {
    parts.push(`<p class="as-of">board as of ${escapeHtml(view.board.as_of)}</p>`);
    parts.push(boardTable("newly opened (last week)", view.board.newly_opened));
    parts.push(boardTable("still open", view.board.still_open));
  }
  return parts.join("");
}

// --- stats panel ------------------------------------------------------------

export interface StatsView {
  state: ViewState;
  result: StatPayload | null;
  error: ApiError | null;
}

/** Operations that need a second series. */
export function needsSecondSeries(operation: string): boolean {
  return operation === "correlation" || operation === "regression";
}

/**
 * Input form plus the last result, which stays attached to the inputs echoed
 * by the service so selections can be pivoted and compared.
 */
export function renderStatsPanel(view: StatsView): string {
  const { statsOp, statsX, statsY } = view.state;
  const opOptions = STAT_OPERATIONS.map((name) =>
    option(name, name, name === statsOp),
  ).join("");
  const xOptions = SERIES_NAMES.map((name) =>
    option(name, name, name === statsX),
  ).join("");
  const yOptions = SERIES_NAMES.map((name) =>
    option(name, name, name === statsY),
  ).join("");
  const yDisabled = needsSecondSeries(statsOp) ? "" : " disabled";
  const form = `
    <form id="stats-form">
      <label>operation <select id="stats-op">${opOptions}</select></label>
      <label>x series <select id="stats-x">${xOptions}</select></label>
      <label>y series <select id="stats-y"${yDisabled}>${yOptions}</select></label>
      <button type="submit" id="stats-run">compute</button>
    </form>
  `;
  let body = "";
  if (view.error !== null) {
    body = renderErrorBox(view.error);
  } else if (view.result !== null) {
    const rows = Object.entries(view.result.values)
      .map(
        ([key, value]) =>
          `<tr><td>${escapeHtml(key)}</td>` +
          `<td class="num" data-stat="${escapeHtml(key)}">${showNumber(value)}</td></tr>`,
      )
      .join("");
    body = `
      <div class="stat-result">
        <h4>${escapeHtml(view.result.operation)}(${escapeHtml(view.result.inputs.join(", "))})</h4>
        <table class="stat-table"><tbody>
          ${rows}
          <tr><td>n</td><td class="num" data-stat="n">${showNumber(view.result.n)}</td></tr>
        </tbody></table>
      </div>
    `;
  }
  return form + body;
}
