/** Typed client for the search service's HTTP API.
 *
 * The fetch implementation is injected so tests can run without a
 * browser or a server; the app passes the real `fetch`.  Server-side
 * failures arrive as `ApiError` carrying the service's own
 * `{error, detail}` body; transport failures become `ConnectionError`.
 */

import type {
  ChildrenResponse,
  OntologyNode,
  ResultFormat,
  SearchResponse,
  SourceInfo,
} from "./types.js";

export interface SearchParams {
  q: string;
  depth?: number;
  gamma?: number;
  sources?: string[];
  limit?: number;
}

/** The slice of the Fetch API the client relies on. */
export interface ResponseLike {
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
  arrayBuffer(): Promise<ArrayBuffer>;
}

export type FetchLike = (
  url: string,
  init?: { signal?: AbortSignal },
) => Promise<ResponseLike>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    public readonly detail: string,
  ) {
    super(`${code}: ${detail}`);
    this.name = "ApiError";
  }
}

export class ConnectionError extends Error {
  constructor(cause: unknown) {
    super("cannot reach the search service");
    this.name = "ConnectionError";
    this.cause = cause;
  }
}

function isAbort(error: unknown): boolean {
  return error instanceof Error && error.name === "AbortError";
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike,
  ) {}

  /** The exact query string the service documents, in a stable order. */
  searchUrl(params: SearchParams, format?: ResultFormat): string {
    const qs = new URLSearchParams();
    qs.set("q", params.q);
    if (params.depth !== undefined) qs.set("depth", String(params.depth));
    if (params.gamma !== undefined) qs.set("gamma", String(params.gamma));
    if (params.sources !== undefined && params.sources.length > 0) {
      qs.set("sources", params.sources.join(","));
    }
    if (params.limit !== undefined) qs.set("limit", String(params.limit));
    if (format !== undefined) qs.set("format", format);
    return `${this.baseUrl}/api/search?${qs.toString()}`;
  }

  private async request(url: string, signal?: AbortSignal): Promise<ResponseLike> {
    let response: ResponseLike;
    try {
      response = await this.fetchFn(url, { signal });
    } catch (error) {
      if (isAbort(error)) throw error;
      throw new ConnectionError(error);
    }
    if (!response.ok) {
      let code = "HttpError";
      let detail = `status ${response.status}`;
      try {
        const body = (await response.json()) as { error?: string; detail?: string };
        if (body && typeof body.error === "string") code = body.error;
        if (body && typeof body.detail === "string") detail = body.detail;
      } catch {
        // non-JSON error body: keep the status-based message
      }
      throw new ApiError(response.status, code, detail);
    }
    return response;
  }

  async search(params: SearchParams, signal?: AbortSignal): Promise<SearchResponse> {
    const response = await this.request(this.searchUrl(params), signal);
    return (await response.json()) as SearchResponse;
  }

  /** Raw body bytes for export — passed through untouched. */
  async searchRaw(
    params: SearchParams,
    format: ResultFormat,
  ): Promise<Uint8Array<ArrayBuffer>> {
    const response = await this.request(this.searchUrl(params, format));
    return new Uint8Array(await response.arrayBuffer());
  }

  async ontology(): Promise<OntologyNode> {
    const response = await this.request(`${this.baseUrl}/api/ontology`);
    return (await response.json()) as OntologyNode;
  }

  async children(classId: string): Promise<ChildrenResponse> {
    const response = await this.request(
      `${this.baseUrl}/api/ontology/${encodeURIComponent(classId)}/children`,
    );
    return (await response.json()) as ChildrenResponse;
  }

  async sources(): Promise<SourceInfo[]> {
    const response = await this.request(`${this.baseUrl}/api/sources`);
    return (await response.json()) as SourceInfo[];
  }

  async health(): Promise<boolean> {
    try {
      await this.request(`${this.baseUrl}/healthz`);
      return true;
    } catch {
      return false;
    }
  }
}

/** At most one request in flight: a newer run aborts the older one.
 *
 * The superseded promise rejects with an AbortError, which callers
 * should treat as "ignore this result", not as a failure to display.
 */
export class SingleFlight {
  private controller: AbortController | null = null;

  async run<T>(task: (signal: AbortSignal) => Promise<T>): Promise<T> {
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;
    try {
      return await task(controller.signal);
    } finally {
      if (this.controller === controller) this.controller = null;
    }
  }

  abort(): void {
    this.controller?.abort();
    this.controller = null;
  }
}

export function isAbortError(error: unknown): boolean {
  return isAbort(error);
}
