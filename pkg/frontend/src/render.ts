/** Pure HTML builders: every view is a function from data to markup.
 *
 * Nothing in this module touches `document`, which keeps the rendering
 * logic runnable (and tested) in plain Node.  All interpolated text is
 * escaped; the only event contract is `data-*` attributes for the app
 * shell to delegate on.
 */

import type {
  Ancestor,
  OntologyNode,
  SearchRecord,
  SearchResponse,
  SourceInfo,
} from "./types.js";
import type { SortKey } from "./state.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

/** Weights print like the service does: up to 6 decimals, no exponent. */
export function formatWeight(value: number): string {
  if (Number.isInteger(value)) return `${value}.0`;
  return value.toFixed(6).replace(/0+$/, "").replace(/\.$/, ".0");
}

// ------------------------------------------------------------- results

export function sortRecords(records: SearchRecord[], sort: SortKey): SearchRecord[] {
  const rows = [...records];
  switch (sort) {
    case "rank":
      return rows; // server order: score desc, then title/source/id
    case "title":
      return rows.sort((a, b) => a.title.localeCompare(b.title));
    case "year":
      return rows.sort(
        (a, b) => (b.year ?? Number.NEGATIVE_INFINITY) - (a.year ?? Number.NEGATIVE_INFINITY),
      );
    case "source":
      return rows.sort(
        (a, b) => a.source.localeCompare(b.source) || b.score - a.score,
      );
  }
}

function renderDetails(record: SearchRecord): string {
  const rows: string[] = [];
  if (record.authors.length > 0) {
    rows.push(`<dt>Authors</dt><dd>${escapeHtml(record.authors.join("; "))}</dd>`);
  }
  if (record.venue) rows.push(`<dt>Venue</dt><dd>${escapeHtml(record.venue)}</dd>`);
  if (record.url) {
    const href = escapeHtml(record.url);
    rows.push(`<dt>Link</dt><dd><a href="${href}" rel="noopener">${href}</a></dd>`);
  }
  const matches = Object.entries(record.matched_terms)
    .sort(([a], [b]) => a.localeCompare(b))
    .map(([term, count]) => `${escapeHtml(term)} × ${count}`)
    .join(", ");
  if (matches) rows.push(`<dt>Matched terms</dt><dd>${matches}</dd>`);
  rows.push(`<dt>Record id</dt><dd><code>${escapeHtml(record.record_id)}</code></dd>`);
  return `<dl class="record-details">${rows.join("")}</dl>`;
}

export function renderResultsTable(records: SearchRecord[], sort: SortKey): string {
  if (records.length === 0) {
    return '<p class="empty">No records matched this query.</p>';
  }
  const header = (key: SortKey, label: string) => {
    const active = key === sort ? ' aria-sort="descending"' : "";
    return `<th${active}><button type="button" class="sort" data-sort="${key}">${label}</button></th>`;
  };
  const head =
    "<tr>" +
    header("rank", "Score") +
    header("title", "Title") +
    "<th>Abstract</th>" +
    header("year", "Year") +
    header("source", "Source") +
    "</tr>";
  const body = sortRecords(records, sort)
    .map(
      (record) => `
  <tr>
    <td class="score">${escapeHtml(formatWeight(record.score))}</td>
    <td class="title">
      <details>
        <summary>${escapeHtml(record.title)}</summary>
        ${renderDetails(record)}
      </details>
    </td>
    <td class="abstract">${escapeHtml(record.abstract)}</td>
    <td class="year">${record.year ?? ""}</td>
    <td class="source">${escapeHtml(record.source)}</td>
  </tr>`,
    )
    .join("");
  return `<table class="results"><thead>${head}</thead><tbody>${body}</tbody></table>`;
}

export function renderSummary(response: SearchResponse): string {
  const duplicates =
    response.dedup_removed === 1 ? "1 duplicate" : `${response.dedup_removed} duplicates`;
  return (
    `<p class="summary"><strong>${response.count}</strong> record(s) for ` +
    `<em>${escapeHtml(response.query)}</em> — ${duplicates} removed</p>`
  );
}

export function renderChips(terms: Record<string, number>): string {
  const chips = Object.entries(terms)
    .sort(([ta, wa], [tb, wb]) => wb - wa || ta.localeCompare(tb))
    .map(
      ([term, weight]) =>
        `<span class="chip" title="weight ${formatWeight(weight)}">` +
        `${escapeHtml(term)} <b>${formatWeight(weight)}</b></span>`,
    );
  return `<div class="chips">${chips.join("")}</div>`;
}

export function renderStats(perSource: SearchResponse["per_source"]): string {
  const rows = Object.entries(perSource)
    .sort(([a], [b]) => a.localeCompare(b))
    .map(
      ([source, stats]) => `
  <tr>
    <td>${escapeHtml(source)}</td>
    <td>${stats.fetched}</td>
    <td>${stats.kept}</td>
    <td class="${stats.errors > 0 ? "has-errors" : ""}">${stats.errors}</td>
  </tr>`,
    )
    .join("");
  return (
    '<table class="stats"><thead><tr><th>Source</th><th>Fetched</th>' +
    `<th>Kept</th><th>Errors</th></tr></thead><tbody>${rows}</tbody></table>`
  );
}

// -------------------------------------------------------------- errors

export function renderErrorBanner(message: string): string {
  return `<div class="banner error" role="alert">${escapeHtml(message)}</div>`;
}

export function renderNotice(message: string): string {
  return `<div class="banner notice">${escapeHtml(message)}</div>`;
}

// ------------------------------------------------------------ ontology

export function renderTree(node: OntologyNode, depth = 0): string {
  const button =
    `<button type="button" class="tree-label" data-class-id="${escapeHtml(node.id)}" ` +
    `data-label="${escapeHtml(node.label)}">${escapeHtml(node.label)}</button>`;
  if (node.children.length === 0) {
    return `<li class="leaf">${button}</li>`;
  }
  const children = node.children.map((child) => renderTree(child, depth + 1)).join("");
  const open = depth < 1 ? " open" : "";
  return `<li><details${open}><summary>${button}</summary><ul>${children}</ul></details></li>`;
}

/** A forest arrives as a synthetic unnamed root; skip its empty label. */
export function renderTreeRoot(root: OntologyNode): string {
  const items =
    root.id === "" && root.label === ""
      ? root.children.map((child) => renderTree(child)).join("")
      : renderTree(root);
  return `<ul class="tree">${items}</ul>`;
}

export function renderBreadcrumbs(label: string, ancestors: Ancestor[]): string {
  const chain = [...ancestors]
    .sort((a, b) => b.hops - a.hops)
    .map(
      (ancestor) =>
        `<button type="button" class="crumb" data-class-id="${escapeHtml(ancestor.id)}" ` +
        `data-label="${escapeHtml(ancestor.label)}">${escapeHtml(ancestor.label)}</button>`,
    );
  chain.push(`<span class="crumb current">${escapeHtml(label)}</span>`);
  return `<nav class="breadcrumbs">${chain.join(" › ")}</nav>`;
}

// ------------------------------------------------------------- sources

export function renderSourceOptions(sources: SourceInfo[], selected: string[]): string {
  return sources
    .map((source) => {
      const checked =
        selected.length === 0 || selected.includes(source.id) ? " checked" : "";
      return (
        `<label class="source-option"><input type="checkbox" name="source" ` +
        `value="${escapeHtml(source.id)}"${checked}> ` +
        `${escapeHtml(source.display_name)} <small>(${escapeHtml(source.mode)})</small></label>`
      );
    })
    .join("");
}
