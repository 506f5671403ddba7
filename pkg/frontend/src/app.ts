/** App shell: wires the pure renderers and the API client to the DOM.
 *
 * This is the only module that touches `document`/`window`.  It owns
 * the UI state, mirrors it into the URL, and keeps at most one search
 * request in flight.
 */

import {
  ApiClient,
  ApiError,
  ConnectionError,
  SingleFlight,
  isAbortError,
} from "./api.js";
import {
  DEFAULT_STATE,
  type SortKey,
  type UiState,
  appendTerm,
  decodeState,
  encodeState,
} from "./state.js";
import {
  renderBreadcrumbs,
  renderChips,
  renderErrorBanner,
  renderNotice,
  renderResultsTable,
  renderSourceOptions,
  renderStats,
  renderSummary,
  renderTreeRoot,
} from "./render.js";
import type { SearchResponse } from "./types.js";

interface Elements {
  form: HTMLFormElement;
  query: HTMLInputElement;
  depth: HTMLInputElement;
  gamma: HTMLInputElement;
  limit: HTMLInputElement;
  sourceList: HTMLElement;
  banner: HTMLElement;
  summary: HTMLElement;
  chips: HTMLElement;
  stats: HTMLElement;
  results: HTMLElement;
  tree: HTMLElement;
  breadcrumbs: HTMLElement;
  exportJson: HTMLButtonElement;
  exportXml: HTMLButtonElement;
}

function grab(root: Document): Elements {
  const byId = <T extends HTMLElement>(id: string): T => {
    const el = root.getElementById(id);
    if (!el) throw new Error(`missing #${id} in index.html`);
    return el as T;
  };
  return {
    form: byId<HTMLFormElement>("search-form"),
    query: byId<HTMLInputElement>("query"),
    depth: byId<HTMLInputElement>("depth"),
    gamma: byId<HTMLInputElement>("gamma"),
    limit: byId<HTMLInputElement>("limit"),
    sourceList: byId("source-list"),
    banner: byId("banner"),
    summary: byId("summary"),
    chips: byId("chips"),
    stats: byId("stats"),
    results: byId("results"),
    tree: byId("tree"),
    breadcrumbs: byId("breadcrumbs"),
    exportJson: byId<HTMLButtonElement>("export-json"),
    exportXml: byId<HTMLButtonElement>("export-xml"),
  };
}

export class App {
  private state: UiState = { ...DEFAULT_STATE };
  private lastResponse: SearchResponse | null = null;
  private readonly flight = new SingleFlight();
  private readonly el: Elements;

  constructor(
    private readonly api: ApiClient,
    private readonly doc: Document,
    private readonly win: Window,
  ) {
    this.el = grab(doc);
  }

  async start(): Promise<void> {
    this.state = decodeState(this.win.location.search);
    this.pushStateToControls();
    this.bindEvents();
    await Promise.all([this.loadTree(), this.loadSources()]);
    if (this.state.q.trim() !== "") {
      await this.runSearch();
    }
  }

  // ------------------------------------------------------------ state

  private pushStateToControls(): void {
    this.el.query.value = this.state.q;
    this.el.depth.value = String(this.state.depth);
    this.el.gamma.value = String(this.state.gamma);
    this.el.limit.value = String(this.state.limit);
  }

  private pullStateFromControls(): void {
    const num = (raw: string, parse: (s: string) => number, fallback: number) => {
      const value = parse(raw);
      return Number.isFinite(value) ? value : fallback;
    };
    this.state.q = this.el.query.value;
    this.state.depth = num(this.el.depth.value, (s) => Number.parseInt(s, 10), DEFAULT_STATE.depth);
    this.state.gamma = num(this.el.gamma.value, Number.parseFloat, DEFAULT_STATE.gamma);
    this.state.limit = num(this.el.limit.value, (s) => Number.parseInt(s, 10), DEFAULT_STATE.limit);
    const boxes = this.el.sourceList.querySelectorAll<HTMLInputElement>(
      'input[name="source"]',
    );
    const picked = Array.from(boxes).filter((b) => b.checked).map((b) => b.value);
    this.state.sources = picked.length === boxes.length ? [] : picked;
  }

  private syncUrl(): void {
    const encoded = encodeState(this.state);
    const target = encoded ? `?${encoded}` : this.win.location.pathname;
    this.win.history.replaceState(null, "", target);
  }

  // ----------------------------------------------------------- events

  private bindEvents(): void {
    this.el.form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.runSearch();
    });
    this.el.results.addEventListener("click", (event) => {
      const button = (event.target as HTMLElement).closest<HTMLElement>("button.sort");
      if (!button) return;
      this.state.sort = (button.dataset["sort"] as SortKey) ?? "rank";
      this.syncUrl();
      this.renderResults();
    });
    const onClassClick = (event: Event) => {
      const button = (event.target as HTMLElement).closest<HTMLElement>("[data-class-id]");
      if (!button) return;
      event.preventDefault();
      const label = button.dataset["label"] ?? "";
      const id = button.dataset["classId"] ?? "";
      this.el.query.value = appendTerm(this.el.query.value, label);
      void this.showBreadcrumbs(id);
    };
    this.el.tree.addEventListener("click", onClassClick);
    this.el.breadcrumbs.addEventListener("click", onClassClick);
    this.el.exportJson.addEventListener("click", () => void this.exportAs("json"));
    this.el.exportXml.addEventListener("click", () => void this.exportAs("xml"));
  }

  // ----------------------------------------------------------- search

  async runSearch(): Promise<void> {
    this.pullStateFromControls();
    if (this.state.q.trim() === "") {
      this.el.banner.innerHTML = renderNotice("Type a query first — nothing was sent.");
      return;
    }
    this.syncUrl();
    this.el.banner.innerHTML = "";
    this.el.summary.innerHTML = "<p class=\"summary\">Searching…</p>";
    try {
      const response = await this.flight.run((signal) =>
        this.api.search(
          {
            q: this.state.q,
            depth: this.state.depth,
            gamma: this.state.gamma,
            sources: this.state.sources,
            limit: this.state.limit,
          },
          signal,
        ),
      );
      this.lastResponse = response;
      this.el.summary.innerHTML = renderSummary(response);
      this.el.chips.innerHTML = renderChips(response.expanded_terms);
      this.el.stats.innerHTML = renderStats(response.per_source);
      this.renderResults();
    } catch (error) {
      if (isAbortError(error)) return; // a newer search took over
      this.el.summary.innerHTML = "";
      if (error instanceof ApiError) {
        this.el.banner.innerHTML = renderErrorBanner(
          `The service rejected this search (${error.code}): ${error.detail}`,
        );
      } else if (error instanceof ConnectionError) {
        this.el.banner.innerHTML = renderErrorBanner(
          "Cannot reach the search service — is it running?",
        );
      } else {
        throw error;
      }
    }
  }

  private renderResults(): void {
    if (!this.lastResponse) return;
    this.el.results.innerHTML = renderResultsTable(
      this.lastResponse.records,
      this.state.sort,
    );
  }

  // --------------------------------------------------------- ontology

  private async loadTree(): Promise<void> {
    try {
      const root = await this.api.ontology();
      this.el.tree.innerHTML = renderTreeRoot(root);
    } catch {
      this.el.tree.innerHTML = renderNotice("Hierarchy unavailable.");
    }
  }

  private async showBreadcrumbs(classId: string): Promise<void> {
    try {
      const info = await this.api.children(classId);
      this.el.breadcrumbs.innerHTML = renderBreadcrumbs(info.label, info.ancestors);
    } catch (error) {
      if (error instanceof ApiError && error.status === 404) {
        this.el.breadcrumbs.innerHTML = renderNotice(`Unknown class: ${classId}`);
      } else {
        this.el.breadcrumbs.innerHTML = "";
      }
    }
  }

  private async loadSources(): Promise<void> {
    try {
      const sources = await this.api.sources();
      this.el.sourceList.innerHTML = renderSourceOptions(sources, this.state.sources);
    } catch {
      this.el.sourceList.innerHTML = renderNotice("Source list unavailable.");
    }
  }

  // ----------------------------------------------------------- export

  private async exportAs(format: "json" | "xml"): Promise<void> {
    this.pullStateFromControls();
    if (this.state.q.trim() === "") {
      this.el.banner.innerHTML = renderNotice("Run a search before exporting.");
      return;
    }
    try {
      const bytes = await this.api.searchRaw(
        {
          q: this.state.q,
          depth: this.state.depth,
          gamma: this.state.gamma,
          sources: this.state.sources,
          limit: this.state.limit,
        },
        format,
      );
      const type = format === "json" ? "application/json" : "application/xml";
      const blob = new Blob([bytes], { type });
      const url = URL.createObjectURL(blob);
      const link = this.doc.createElement("a");
      link.href = url;
      link.download = `scholarlens-results.${format}`;
      link.click();
      URL.revokeObjectURL(url);
    } catch (error) {
      const reason = error instanceof Error ? error.message : String(error);
      this.el.banner.innerHTML = renderErrorBanner(`Export failed: ${reason}`);
    }
  }
}
