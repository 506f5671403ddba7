"""Search orchestration: expand, fan out, score, deduplicate, rank.

`federate_search` is the engine's front door.  It expands the raw query
over the ontology, runs every requested adapter concurrently, scores each
record against the expanded terms, drops non-matches, collapses
duplicates by normalized title + year, and returns a deterministically
ordered `ResultSet` — the output never depends on which adapter finished
first.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from .cache import CacheStore
from .errors import EmptyQueryError, UnknownSourceError
from .extraction import ScholarRecord
from .ontology import ExpandedQuery, Ontology, expand_query
from .sources import FetchOutcome, SourceRegistry, run_adapter
from .text import count_phrase, normalize, tokenize

logger = logging.getLogger(__name__)

MAX_LIMIT = 1000

TITLE_WEIGHT = 3
ABSTRACT_WEIGHT = 1


@dataclass
class SearchRequest:
    """One search as the user phrased it, plus knobs with safe defaults."""

    raw_query: str
    depth: int = 1
    gamma: float = 0.5
    sources: Optional[list[str]] = None  # None means every registered source
    limit: int = 50
    format: str = "json"

    def validate(self) -> None:
        if not normalize(self.raw_query):
            raise EmptyQueryError()
        if self.depth < 0:
            raise ValueError("depth must be non-negative")
        if not (0.0 < self.gamma <= 1.0):
            raise ValueError("gamma must be in (0, 1]")
        if not (1 <= self.limit <= MAX_LIMIT):
            raise ValueError(f"limit must be in [1, {MAX_LIMIT}]")
        if self.format not in ("json", "xml", "table"):
            raise ValueError(f"unknown format {self.format!r}")


@dataclass
class ScoredRecord:
    """A record plus its relevance score and per-term match counts."""

    record: ScholarRecord
    score: float
    matched_terms: dict[str, int] = field(default_factory=dict)


@dataclass
class SourceStats:
    fetched: int = 0
    kept: int = 0
    errors: int = 0


@dataclass
class ResultSet:
    """The merged, deduplicated, deterministically ordered search output."""

    query: str
    depth: int
    gamma: float
    expanded_terms: dict[str, float]
    records: list[ScoredRecord]
    per_source_stats: dict[str, SourceStats]
    dedup_removed: int


def _sort_key(sr: ScoredRecord) -> tuple:
    return (-sr.score, sr.record.title, sr.record.source_id, sr.record.record_id)


def score_record(r: ScholarRecord, eq: ExpandedQuery) -> ScoredRecord:
    """Weighted phrase-occurrence score over title and abstract.

    score = Σ over expanded terms t of
        weight(t) × (3·count(t, title) + count(t, abstract))

    where count is non-overlapping whole-phrase occurrences on word
    boundaries after normalization.  `matched_terms` maps each term with
    any occurrence to its total (title + abstract) count.
    """
    score = 0.0
    matched: dict[str, int] = {}
    for term, weight in eq.weighted_terms.items():
        in_title = count_phrase(term, r.title)
        in_abstract = count_phrase(term, r.abstract)
        if in_title or in_abstract:
            matched[term] = in_title + in_abstract
            score += weight * (TITLE_WEIGHT * in_title + ABSTRACT_WEIGHT * in_abstract)
    return ScoredRecord(record=r, score=score, matched_terms=matched)


def dedup_key(r: ScholarRecord) -> str:
    """Normalized title plus year; the identity used to collapse portal rows."""
    return "%s|%s" % (normalize(r.title), "" if r.year is None else r.year)


def dedupe(scored: list[ScoredRecord]) -> tuple[list[ScoredRecord], int]:
    """Keep the best-ranked representative per dedup key.

    "Best" follows the ResultSet ordering (score desc, then title, source,
    record id), so the survivor is deterministic.  Returns the kept
    records in that order and the number removed.
    """
    kept: list[ScoredRecord] = []
    seen: set[str] = set()
    for sr in sorted(scored, key=_sort_key):
        key = dedup_key(sr.record)
        if key in seen:
            continue
        seen.add(key)
        kept.append(sr)
    return kept, len(scored) - len(kept)


def federate_search(
    req: SearchRequest,
    ontology: Ontology,
    registry: SourceRegistry,
    cache: Optional[CacheStore] = None,
) -> ResultSet:
    """Run one federated search end to end.

    Adapters run concurrently, one worker per requested source; per-source
    failures land in `per_source_stats` and never abort the search.  The
    result is a pure function of (request, ontology, fixture corpus) —
    adapter completion order cannot influence it.
    """
    req.validate()
    source_ids = req.sources if req.sources is not None else [s for s in sorted(registry.configs)]
    if not source_ids:
        raise UnknownSourceError("(no sources configured)")
    for sid in source_ids:
        if sid not in registry.configs:
            raise UnknownSourceError(sid)

    eq = expand_query(ontology, [req.raw_query], depth=req.depth, gamma=req.gamma)
    terms = tokenize(req.raw_query)

    outcomes: dict[str, FetchOutcome] = {}
    failures: dict[str, str] = {}
    with ThreadPoolExecutor(max_workers=len(source_ids)) as pool:
        futures = {
            sid: pool.submit(
                run_adapter,
                registry.configs[sid],
                terms,
                ruleset=registry.rulesets.get(sid),
                cache=cache,
            )
            for sid in source_ids
        }
        for sid, future in futures.items():
            try:
                outcomes[sid] = future.result()
            except Exception as exc:  # noqa: BLE001 — a source must never sink the search
                logger.warning("source %s failed: %s", sid, exc)
                failures[sid] = str(exc)

    scored: list[ScoredRecord] = []
    for sid in source_ids:
        outcome = outcomes.get(sid)
        if outcome is None:
            continue
        for record in outcome.records:
            sr = score_record(record, eq)
            if sr.score > 0:
                scored.append(sr)

    deduped, removed = dedupe(scored)
    final = deduped[: req.limit]

    kept_by_source: dict[str, int] = {}
    for sr in final:
        kept_by_source[sr.record.source_id] = kept_by_source.get(sr.record.source_id, 0) + 1

    stats: dict[str, SourceStats] = {}
    for sid in source_ids:
        if sid in failures:
            stats[sid] = SourceStats(fetched=0, kept=0, errors=1)
        else:
            outcome = outcomes[sid]
            stats[sid] = SourceStats(
                fetched=len(outcome.records),
                kept=kept_by_source.get(sid, 0),
                errors=len(outcome.errors),
            )

    return ResultSet(
        query=req.raw_query,
        depth=req.depth,
        gamma=req.gamma,
        expanded_terms=dict(eq.weighted_terms),
        records=final,
        per_source_stats=stats,
        dedup_removed=removed,
    )
