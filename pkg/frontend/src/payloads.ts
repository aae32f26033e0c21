// Wire types for the relquant scoreboard API.
//
// Every interface here mirrors one JSON payload produced by the service,
// field for field.  The dashboard never derives numbers of its own: whatever
// it displays is one of these fields, rendered verbatim, so each shape below
// is the single source of truth for what can appear on screen.

/** Canonical indicator names, in the service's reporting order. */
export const INDICATOR_NAMES = [
  "mttf",
  "mttr",
  "mtbf",
  "tf_per_kloc",
  "fr",
  "quality",
  "av",
  "ed",
  "ifr",
  "tqi",
  "mtt_per_kloc",
  "pcr",
  "klcc",
  "fp",
] as const;

export type IndicatorName = (typeof INDICATOR_NAMES)[number];

/** Display units, as reported in series payloads. */
export const INDICATOR_UNITS: Record<IndicatorName, string> = {
  mttf: "hours",
  mttr: "hours",
  mtbf: "hours",
  tf_per_kloc: "failures/KLOC",
  fr: "failures/hour",
  quality: "defects/KLOC",
  av: "percent",
  ed: "1/hour",
  ifr: "failures/hour",
  tqi: "ratio",
  mtt_per_kloc: "hours/KLOC",
  pcr: "ratio",
  klcc: "KLOC",
  fp: "function points",
} as const;

/** Raw per-release fields the stats endpoint accepts alongside indicators. */
export const RELEASE_FIELDS = [
  "test_hours",
  "dev_effort_pd",
  "test_effort_pd",
  "new_lines",
  "changed_lines",
  "deleted_lines",
  "total_product_loc",
] as const;

/** Everything that can be an x or y series in a stats request. */
export const SERIES_NAMES: readonly string[] = [
  ...INDICATOR_NAMES,
  ...RELEASE_FIELDS,
];

export const STAT_OPERATIONS = [
  "mean",
  "stddev",
  "correlation",
  "regression",
] as const;

export type StatOperation = (typeof STAT_OPERATIONS)[number];

/** Severities in board order, most urgent first. */
export const SEVERITY_ORDER = ["blocking", "high", "medium", "low"] as const;

// --- envelope ---------------------------------------------------------------

export interface ApiErrorBody {
  code: string;
  message: string;
  detail: Record<string, unknown>;
}

export interface OkEnvelope<T> {
  status: "ok";
  data: T;
  generated_at: string;
}

export interface ErrorEnvelope {
  status: "error";
  error: ApiErrorBody;
  generated_at: string;
}

export type ApiEnvelope<T> = OkEnvelope<T> | ErrorEnvelope;

// --- payload shapes ---------------------------------------------------------

export interface ReleaseRow {
  release_id: string;
  component: string;
  version: string;
  released_at: string;
  production: boolean;
  dev_start: string;
  dev_end: string;
  test_start: string;
  test_end: string;
  life_end: string | null;
  test_hours: number;
  new_lines: number;
  changed_lines: number;
  deleted_lines: number;
  total_product_loc: number;
  dev_effort_pd: number;
  test_effort_pd: number;
}

export interface ReleasesPayload {
  releases: ReleaseRow[];
}

/** One indicator slot: either an applicable value or an NA reason, never both. */
export type IndicatorCell = { value: number } | { not_applicable: string };

export interface IndicatorSetPayload {
  release_id: string;
  as_of: string;
  indicators: Record<string, IndicatorCell>;
}

interface SeriesPointBase {
  release_id: string;
  version: string;
  released_at: string;
}

export type SeriesPoint =
  | (SeriesPointBase & { value: number })
  | (SeriesPointBase & { not_applicable: string });

export interface SeriesPayload {
  indicator: string;
  unit: string;
  component: string | null;
  as_of: string;
  points: SeriesPoint[];
}

export interface WeeklyCounts {
  opened: number;
  closed: number;
  backlog: number;
}

export interface WeekEntry {
  week: string;
  platforms: Record<string, WeeklyCounts>;
  overall: WeeklyCounts;
  severity_opened: Record<string, number>;
}

export interface WeeklyPayload {
  platform: string | null;
  weeks: WeekEntry[];
}

export interface BoardAnomaly {
  anomaly_id: string;
  component: string;
  release_id: string;
  severity: string;
  environment: string;
  opened_at: string;
  closed_at: string | null;
  title: string;
  age_hours: number;
}

export interface BoardPayload {
  as_of: string;
  newly_opened: BoardAnomaly[];
  still_open: BoardAnomaly[];
}

export interface DistributionPayload {
  release_id: string;
  new: number;
  inherited: number;
  solved: number;
}

export interface BreakdownPayload {
  release_id: string;
  counts: Record<string, number>;
}

export interface DecayWeek {
  week: number;
  observed: number;
  predicted: number;
  flagged: boolean;
}

export interface DecayPayload {
  release_id: string;
  floor: number;
  amplitude: number;
  rate: number;
  rmse: number;
  deviation_k: number;
  weeks: DecayWeek[];
}

export interface StatPayload {
  operation: string;
  inputs: string[];
  values: Record<string, number>;
  n: number;
}

export interface StatsRequest {
  op: StatOperation;
  x: string;
  y?: string;
  filter?: { component?: string; as_of?: string };
}

/** True when an indicator cell carries a value rather than an NA reason. */
export function isApplicable<T extends IndicatorCell>(
  cell: T,
): cell is Extract<T, { value: number }> {
  return "value" in cell;
}
