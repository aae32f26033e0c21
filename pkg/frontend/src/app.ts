// Browser glue: view state <-> URL <-> fetches <-> panel HTML.
//
// All rendering goes through the pure functions in panels.ts; this class
// only owns the mutable state, the event wiring and the fetch lifecycles.
// Every panel refresh takes a ticket from its own RequestSequencer and a
// response is dropped unless its ticket is still current, so out-of-order
// responses can never paint a stale view.

import { ApiError, ScoreboardClient } from "./api.js";
import {
  renderControls,
  renderSeriesExplorer,
  renderStatsPanel,
  renderWeeklyBoard,
  needsSecondSeries,
} from "./panels.js";
import type {
  ReleaseRow,
  SeriesPayload,
  StatPayload,
  StatsRequest,
} from "./payloads.js";
import { RequestSequencer } from "./requests.js";
import {
  readViewState,
  sanitizeIndicators,
  writeViewState,
  type ViewState,
} from "./viewstate.js";

const SKELETON = `
  <header>
    <h1>release quality scoreboard</h1>
    <p class="as-of">snapshot: <span id="generated-at">–</span></p>
  </header>
  <section id="controls" class="controls"></section>
  <section class="panel">
    <h2>indicator series</h2>
    <div id="series-panel"></div>
  </section>
  <section class="panel">
    <h2>weekly anomaly board</h2>
    <div id="weekly-panel"></div>
  </section>
  <section class="panel">
    <h2>statistics</h2>
    <div id="stats-panel"></div>
  </section>
`;

function toApiError(failure: unknown): ApiError {
  if (failure instanceof ApiError) {
    return failure;
  }
  const reason = failure instanceof Error ? failure.message : String(failure);
  return new ApiError("ClientError", reason);
}

export class App {
  private state: ViewState;
  private releases: ReleaseRow[] = [];
  private lastStatsResult: StatPayload | null = null;
  private lastStatsError: ApiError | null = null;
  private readonly seriesRequests = new RequestSequencer();
  private readonly weeklyRequests = new RequestSequencer();
  private readonly statsRequests = new RequestSequencer();

  constructor(
    private readonly root: HTMLElement,
    private readonly client: ScoreboardClient,
    private readonly win: Window = window,
  ) {
    this.state = readViewState(this.win.location.search);
  }

  async start(): Promise<void> {
    this.root.innerHTML = SKELETON;
    this.bindEvents();
    this.win.addEventListener("popstate", () => {
      this.state = readViewState(this.win.location.search);
      this.renderControlsRegion();
      this.refreshAll();
    });
    try {
      const result = await this.client.releases();
      this.releases = result.data.releases;
      this.setGeneratedAt(result.generatedAt);
    } catch (failure) {
      this.region("series-panel").innerHTML = renderSeriesExplorer({
        payloads: [],
        releases: [],
        changeRate: null,
        state: this.state,
        error: toApiError(failure),
      });
    }
    this.renderControlsRegion();
    this.refreshAll();
  }

  // --- state ----------------------------------------------------------------

  private setState(patch: Partial<ViewState>): void {
    this.state = { ...this.state, ...patch };
    const query = writeViewState(this.state);
    const url = query === "" ? this.win.location.pathname : `?${query}`;
    this.win.history.replaceState(null, "", url);
    this.renderControlsRegion();
  }

  private region(id: string): HTMLElement {
    const node = this.root.querySelector(`#${id}`);
    if (node === null) {
      throw new Error(`missing dashboard region #${id}`);
    }
    return node as HTMLElement;
  }

  private setGeneratedAt(timestamp: string): void {
    this.region("generated-at").textContent = timestamp;
  }

  private visibleReleases(): ReleaseRow[] {
    if (this.state.component === null) {
      return this.releases;
    }
    return this.releases.filter((r) => r.component === this.state.component);
  }

  private renderControlsRegion(): void {
    this.region("controls").innerHTML = renderControls(
      this.visibleReleases(),
      this.state,
    );
    this.region("stats-panel").innerHTML = renderStatsPanel({
      state: this.state,
      result: this.lastStatsResult,
      error: this.lastStatsError,
    });
  }

  // --- events ---------------------------------------------------------------

  private bindEvents(): void {
    this.root.addEventListener("change", (event) => {
      const target = event.target as HTMLElement;
      switch (target.id) {
        case "control-component": {
          const value = (target as HTMLSelectElement).value;
          this.setState({
            component: value === "" ? null : value,
            releaseFrom: null,
            releaseTo: null,
          });
          this.refreshAll();
          break;
        }
        case "control-indicators": {
          const select = target as HTMLSelectElement;
          const chosen = [...select.selectedOptions].map((o) => o.value);
          this.setState({ indicators: sanitizeIndicators(chosen) });
          this.refreshSeries();
          break;
        }
        case "control-from":
        case "control-to": {
          const value = (target as HTMLSelectElement).value;
          const patch =
            target.id === "control-from"
              ? { releaseFrom: value === "" ? null : value }
              : { releaseTo: value === "" ? null : value };
          this.setState(patch);
          this.refreshSeries();
          break;
        }
        case "control-effort": {
          this.setState({
            overlayEffort: (target as HTMLInputElement).checked,
          });
          this.refreshSeries();
          break;
        }
        case "control-change": {
          this.setState({
            overlayChangeRate: (target as HTMLInputElement).checked,
          });
          this.refreshSeries();
          break;
        }
        case "stats-op":
        case "stats-x":
        case "stats-y": {
          const value = (target as HTMLSelectElement).value;
          if (target.id === "stats-op") {
            this.setState({ statsOp: value as ViewState["statsOp"] });
          } else if (target.id === "stats-x") {
            this.setState({ statsX: value });
          } else {
            this.setState({ statsY: value });
          }
          break;
        }
        default:
          break;
      }
    });
    this.root.addEventListener("submit", (event) => {
      const target = event.target as HTMLElement;
      if (target.id === "stats-form") {
        event.preventDefault();
        this.runStats();
      }
    });
  }

  // --- fetch lifecycles -----------------------------------------------------

  private refreshAll(): void {
    this.refreshSeries();
    this.refreshWeekly();
  }

  private async refreshSeries(): Promise<void> {
    const ticket = this.seriesRequests.begin();
    const { component, indicators, overlayChangeRate } = this.state;
    try {
      const fetches = indicators.map((name) =>
        this.client.series(name, { component }),
      );
      const changeRateFetch = overlayChangeRate
        ? this.client.series("klcc", { component })
        : null;
      const results = await Promise.all(fetches);
      const changeRate = changeRateFetch === null ? null : await changeRateFetch;
      if (!this.seriesRequests.isCurrent(ticket)) {
        return;
      }
      const payloads: SeriesPayload[] = results.map((r) => r.data);
      const latest = results[results.length - 1] ?? changeRate;
      if (latest !== null && latest !== undefined) {
        this.setGeneratedAt(latest.generatedAt);
      }
      this.region("series-panel").innerHTML = renderSeriesExplorer({
        payloads,
        releases: this.releases,
        changeRate: changeRate === null ? null : changeRate.data,
        state: this.state,
        error: null,
      });
    } catch (failure) {
      if (!this.seriesRequests.isCurrent(ticket)) {
        return;
      }
      this.region("series-panel").innerHTML = renderSeriesExplorer({
        payloads: [],
        releases: [],
        changeRate: null,
        state: this.state,
        error: toApiError(failure),
      });
    }
  }

  private async refreshWeekly(): Promise<void> {
    const ticket = this.weeklyRequests.begin();
    try {
      const [weekly, board] = await Promise.all([
        this.client.weekly({ platform: this.state.component }),
        this.client.board(),
      ]);
      if (!this.weeklyRequests.isCurrent(ticket)) {
        return;
      }
      this.setGeneratedAt(weekly.generatedAt);
      this.region("weekly-panel").innerHTML = renderWeeklyBoard({
        weekly: weekly.data,
        board: board.data,
        error: null,
      });
    } catch (failure) {
      if (!this.weeklyRequests.isCurrent(ticket)) {
        return;
      }
      this.region("weekly-panel").innerHTML = renderWeeklyBoard({
        weekly: null,
        board: null,
        error: toApiError(failure),
      });
    }
  }

  private async runStats(): Promise<void> {
    const ticket = this.statsRequests.begin();
    const { statsOp, statsX, statsY, component } = this.state;
    const request: StatsRequest = { op: statsOp, x: statsX };
    if (needsSecondSeries(statsOp)) {
      request.y = statsY;
    }
    if (component !== null) {
      request.filter = { component };
    }
    try {
      const result = await this.client.stats(request);
      if (!this.statsRequests.isCurrent(ticket)) {
        return;
      }
      this.lastStatsResult = result.data;
      this.lastStatsError = null;
      this.setGeneratedAt(result.generatedAt);
    } catch (failure) {
      if (!this.statsRequests.isCurrent(ticket)) {
        return;
      }
      this.lastStatsResult = null;
      this.lastStatsError = toApiError(failure);
    }
    this.region("stats-panel").innerHTML = renderStatsPanel({
      state: this.state,
      result: this.lastStatsResult,
      error: this.lastStatsError,
    });
  }
}

/** Start the dashboard against the same origin that served the page. */
export function bootstrap(root: HTMLElement): App {
  const app = new App(root, new ScoreboardClient(""), window);
  void app.start();
  return app;
}
