/** Wire shapes of the search service's JSON responses. */

export interface SourceStats {
  fetched: number;
  kept: number;
  errors: number;
}

export interface SearchRecord {
  record_id: string;
  source: string;
  title: string;
  abstract: string;
  authors: string[];
  year: number | null;
  venue: string | null;
  url: string | null;
  score: number;
  matched_terms: Record<string, number>;
}

export interface SearchResponse {
  query: string;
  depth: number;
  gamma: number;
  expanded_terms: Record<string, number>;
  count: number;
  dedup_removed: number;
  per_source: Record<string, SourceStats>;
  records: SearchRecord[];
}

export interface OntologyNode {
  id: string;
  label: string;
  children: OntologyNode[];
}

export interface ClassRef {
  id: string;
  label: string;
}

export interface Ancestor extends ClassRef {
  hops: number;
}

export interface ChildrenResponse {
  id: string;
  label: string;
  children: ClassRef[];
  ancestors: Ancestor[];
}

export interface SourceInfo {
  id: string;
  display_name: string;
  mode: string;
}

export type ResultFormat = "json" | "xml" | "table";
