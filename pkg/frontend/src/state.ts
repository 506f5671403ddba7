/** The whole UI state fits in a URL query string, so links are shareable
 * and the server can reproduce everything the page shows.
 */

export type SortKey = "rank" | "title" | "year" | "source";

export interface UiState {
  q: string;
  depth: number;
  gamma: number;
  sources: string[]; // empty means "all sources"
  limit: number;
  sort: SortKey;
}

export const DEFAULT_STATE: UiState = {
  q: "",
  depth: 1,
  gamma: 0.5,
  sources: [],
  limit: 50,
  sort: "rank",
};

const SORT_KEYS: readonly SortKey[] = ["rank", "title", "year", "source"];

/** Encode only what differs from the defaults, in a fixed key order. */
export function encodeState(state: UiState): string {
  const qs = new URLSearchParams();
  if (state.q !== "") qs.set("q", state.q);
  if (state.depth !== DEFAULT_STATE.depth) qs.set("depth", String(state.depth));
  if (state.gamma !== DEFAULT_STATE.gamma) qs.set("gamma", String(state.gamma));
  if (state.sources.length > 0) qs.set("sources", state.sources.join(","));
  if (state.limit !== DEFAULT_STATE.limit) qs.set("limit", String(state.limit));
  if (state.sort !== DEFAULT_STATE.sort) qs.set("sort", state.sort);
  return qs.toString();
}

function intOr(raw: string | null, fallback: number): number {
  if (raw === null) return fallback;
  const value = Number.parseInt(raw, 10);
  return Number.isFinite(value) ? value : fallback;
}

function floatOr(raw: string | null, fallback: number): number {
  if (raw === null) return fallback;
  const value = Number.parseFloat(raw);
  return Number.isFinite(value) ? value : fallback;
}

/** Decode tolerantly: anything missing or malformed falls back. */
export function decodeState(queryString: string): UiState {
  const qs = new URLSearchParams(queryString);
  const sortRaw = qs.get("sort");
  const sourcesRaw = qs.get("sources");
  return {
    q: qs.get("q") ?? DEFAULT_STATE.q,
    depth: intOr(qs.get("depth"), DEFAULT_STATE.depth),
    gamma: floatOr(qs.get("gamma"), DEFAULT_STATE.gamma),
    sources: sourcesRaw
      ? sourcesRaw.split(",").map((s) => s.trim()).filter((s) => s.length > 0)
      : [],
    limit: intOr(qs.get("limit"), DEFAULT_STATE.limit),
    sort: SORT_KEYS.includes(sortRaw as SortKey) ? (sortRaw as SortKey) : DEFAULT_STATE.sort,
  };
}

/** Append a clicked ontology label to the query box content. */
export function appendTerm(query: string, label: string): string {
  const trimmed = query.trim();
  if (trimmed === "") return label;
  if (trimmed.toLowerCase().endsWith(label.toLowerCase())) return trimmed;
  return `${trimmed} ${label}`;
}
