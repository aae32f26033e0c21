// View state and its URL round-trip.
//
// Everything the user can select lives in one ViewState object, serialized
// into the query string so a link reproduces the exact view.  Parameters
// equal to the defaults are omitted; unknown or non-canonical values fall
// back to the defaults, so any URL parses into a valid state and
// write(read(url)) is stable.

import {
  INDICATOR_NAMES,
  SERIES_NAMES,
  STAT_OPERATIONS,
  type StatOperation,
} from "./payloads.js";

export interface ViewState {
  /** Component filter shared by the series explorer and the weekly board. */
  component: string | null;
  /** Indicators plotted in the series explorer; canonical names only. */
  indicators: string[];
  /** Inclusive release-id bounds restricting the plotted date range. */
  releaseFrom: string | null;
  releaseTo: string | null;
  /** Overlay per-release effort bars on the series chart. */
  overlayEffort: boolean;
  /** Overlay the changed-code-size (klcc) series on the series chart. */
  overlayChangeRate: boolean;
  /** Stats panel inputs. */
  statsOp: StatOperation;
  statsX: string;
  statsY: string;
}

export const DEFAULT_VIEW_STATE: ViewState = {
  component: null,
  indicators: ["mttf"],
  releaseFrom: null,
  releaseTo: null,
  overlayEffort: false,
  overlayChangeRate: false,
  statsOp: "correlation",
  statsX: "mttr",
  statsY: "dev_effort_pd",
};

/**
 * Keep only canonical indicator names, deduplicated in selection order.
 * An empty result falls back to the default selection so the explorer
 * always has something to plot.
 */
export function sanitizeIndicators(names: readonly string[]): string[] {
  const canonical: readonly string[] = INDICATOR_NAMES;
  const kept: string[] = [];
  for (const name of names) {
    if (canonical.includes(name) && !kept.includes(name)) {
      kept.push(name);
    }
  }
  return kept.length > 0 ? kept : [...DEFAULT_VIEW_STATE.indicators];
}

function sanitizeSeriesName(name: string | null, fallback: string): string {
  return name !== null && SERIES_NAMES.includes(name) ? name : fallback;
}

function sanitizeOperation(name: string | null): StatOperation {
  const operations: readonly string[] = STAT_OPERATIONS;
  return name !== null && operations.includes(name)
    ? (name as StatOperation)
    : DEFAULT_VIEW_STATE.statsOp;
}

function blankToNull(value: string | null): string | null {
  return value === null || value.trim() === "" ? null : value;
}

/** Parse a query string (with or without leading "?") into a ViewState. */
export function readViewState(search: string): ViewState {
  const params = new URLSearchParams(
    search.startsWith("?") ? search.slice(1) : search,
  );
  const rawIndicators = params.get("ind");
  return {
    component: blankToNull(params.get("component")),
    indicators:
      rawIndicators === null
        ? [...DEFAULT_VIEW_STATE.indicators]
        : sanitizeIndicators(rawIndicators.split(",")),
    releaseFrom: blankToNull(params.get("from")),
    releaseTo: blankToNull(params.get("to")),
    overlayEffort: params.get("effort") === "1",
    overlayChangeRate: params.get("change") === "1",
    statsOp: sanitizeOperation(params.get("sop")),
    statsX: sanitizeSeriesName(params.get("sx"), DEFAULT_VIEW_STATE.statsX),
    statsY: sanitizeSeriesName(params.get("sy"), DEFAULT_VIEW_STATE.statsY),
  };
}

/** Serialize a ViewState into a query string, omitting default values. */
export function writeViewState(state: ViewState): string {
  const params = new URLSearchParams();
  if (state.component !== null) {
    params.set("component", state.component);
  }
  const indicators = sanitizeIndicators(state.indicators);
  if (indicators.join(",") !== DEFAULT_VIEW_STATE.indicators.join(",")) {
    params.set("ind", indicators.join(","));
  }
  if (state.releaseFrom !== null) {
    params.set("from", state.releaseFrom);
  }
  if (state.releaseTo !== null) {
    params.set("to", state.releaseTo);
  }
  if (state.overlayEffort) {
    params.set("effort", "1");
  }
  if (state.overlayChangeRate) {
    params.set("change", "1");
  }
  if (state.statsOp !== DEFAULT_VIEW_STATE.statsOp) {
    params.set("sop", state.statsOp);
  }
  if (state.statsX !== DEFAULT_VIEW_STATE.statsX) {
    params.set("sx", state.statsX);
  }
  if (state.statsY !== DEFAULT_VIEW_STATE.statsY) {
    params.set("sy", state.statsY);
  }
  return params.toString();
}
