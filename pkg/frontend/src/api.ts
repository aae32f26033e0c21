// Thin typed client for the scoreboard API.
//
// One method per endpoint; every response comes back in the service's
// envelope and is unwrapped here.  Service-side failures carry the API error
// code so the panels can surface it inline; transport failures are folded
// into the same shape under a synthetic "ConnectionError" code.

import type {
  ApiEnvelope,
  BoardPayload,
  BreakdownPayload,
  DecayPayload,
  DistributionPayload,
  IndicatorSetPayload,
  ReleasesPayload,
  SeriesPayload,
  StatPayload,
  StatsRequest,
  WeeklyPayload,
} from "./payloads.js";

/** A failed request, whether the service rejected it or never answered. */
export class ApiError extends Error {
  readonly code: string;
  readonly detail: Record<string, unknown>;
  readonly httpStatus: number;

  constructor(
    code: string,
    message: string,
    detail: Record<string, unknown> = {},
    httpStatus = 0,
  ) {
    super(message);
    this.name = "ApiError";
    this.code = code;
    this.detail = detail;
    this.httpStatus = httpStatus;
  }
}

/** Unwrapped payload plus the snapshot timestamp from the envelope. */
export interface ApiResult<T> {
  data: T;
  generatedAt: string;
}

/** Build a query string from optional parameters, skipping absent ones. */
export function buildQuery(
  params: Record<string, string | null | undefined>,
): string {
  const search = new URLSearchParams();
  for (const [key, value] of Object.entries(params)) {
    if (value !== null && value !== undefined) {
      search.set(key, value);
    }
  }
  const text = search.toString();
  return text === "" ? "" : `?${text}`;
}

export type FetchLike = (
  url: string,
  init?: RequestInit,
) => Promise<Response>;

export class ScoreboardClient {
  private readonly baseUrl: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl = "", fetchFn?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    this.fetchFn = fetchFn ?? ((url, init) => fetch(url, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<ApiResult<T>> {
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, init);
    } catch (failure) {
      const reason = failure instanceof Error ? failure.message : String(failure);
      throw new ApiError("ConnectionError", `service unreachable: ${reason}`);
    }
    let envelope: ApiEnvelope<T>;
    try {
      envelope = (await response.json()) as ApiEnvelope<T>;
    } catch {
      throw new ApiError(
        "BadResponse",
        `service returned a non-JSON response (HTTP ${response.status})`,
        {},
        response.status,
      );
    }
    if (envelope.status === "error") {
      throw new ApiError(
        envelope.error.code,
        envelope.error.message,
        envelope.error.detail,
        response.status,
      );
    }
    return { data: envelope.data, generatedAt: envelope.generated_at };
  }

  releases(options?: {
    component?: string | null;
    productionOnly?: boolean;
  }): Promise<ApiResult<ReleasesPayload>> {
    const query = buildQuery({
      component: options?.component,
      production_only: options?.productionOnly ? "1" : null,
    });
    return this.request(`/api/releases${query}`);
  }

  indicators(
    releaseId: string,
    asOf?: string | null,
  ): Promise<ApiResult<IndicatorSetPayload>> {
    const query = buildQuery({ as_of: asOf });
    return this.request(
      `/api/releases/${encodeURIComponent(releaseId)}/indicators${query}`,
    );
  }

  series(
    indicator: string,
    options?: { component?: string | null; asOf?: string | null },
  ): Promise<ApiResult<SeriesPayload>> {
    const query = buildQuery({
      indicator,
      component: options?.component,
      as_of: options?.asOf,
    });
    return this.request(`/api/series${query}`);
  }

  weekly(options?: {
    from?: string | null;
    to?: string | null;
    platform?: string | null;
  }): Promise<ApiResult<WeeklyPayload>> {
    const query = buildQuery({
      from: options?.from,
      to: options?.to,
      platform: options?.platform,
    });
    return this.request(`/api/weekly${query}`);
  }

  board(asOf?: string | null): Promise<ApiResult<BoardPayload>> {
    return this.request(`/api/board${buildQuery({ as_of: asOf })}`);
  }

  distribution(
    releaseId: string,
    asOf?: string | null,
  ): Promise<ApiResult<DistributionPayload>> {
    const query = buildQuery({ as_of: asOf });
    return this.request(
      `/api/releases/${encodeURIComponent(releaseId)}/distribution${query}`,
    );
  }

  severity(releaseId: string): Promise<ApiResult<BreakdownPayload>> {
    return this.request(
      `/api/releases/${encodeURIComponent(releaseId)}/severity`,
    );
  }

  environment(releaseId: string): Promise<ApiResult<BreakdownPayload>> {
    return this.request(
      `/api/releases/${encodeURIComponent(releaseId)}/environment`,
    );
  }

  decay(
    releaseId: string,
    k?: number | null,
  ): Promise<ApiResult<DecayPayload>> {
    const query = buildQuery({
      k: k === null || k === undefined ? null : String(k),
    });
    return this.request(
      `/api/releases/${encodeURIComponent(releaseId)}/decay${query}`,
    );
  }

  stats(request: StatsRequest): Promise<ApiResult<StatPayload>> {
    return this.request("/api/stats", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(request),
    });
  }
}
