# One query, every portal, one merged answer.
#
# federate_search expands the query, runs each source adapter in its own
# worker thread, scores what comes back, drops non-matches, collapses
# duplicate (title, year) pairs, and ranks what is left.  The output is a
# pure function of the request and the corpus — thread timing cannot
# change a byte of it.

from pathlib import Path

import scholarlens as sl

REPO = Path(__file__).resolve().parents[1]

ontology = sl.load_ontology(REPO / "fixtures" / "ontologies" / "cs.onto")
registry = sl.load_registry(REPO / "sources")


def run(query, **knobs):
    request = sl.SearchRequest(raw_query=query, **knobs)
    return sl.federate_search(request, ontology, registry)


# A query whose phrase matches strongly in one portal's corpus.
rs = run("Reverse Engineering")
print(f"'{rs.query}': {len(rs.records)} records, {rs.dedup_removed} duplicates removed")
for sr in rs.records:
    print(f"  {sr.score:5.1f}  [{sr.record.source_id}] {sr.record.title[:62]}")

# Per-source accounting shows where records came from and what survived
# scoring, deduplication, and the limit.
print("\nper-source stats:")
for source_id, stats in sorted(rs.per_source_stats.items()):
    print(f"  {source_id}: fetched={stats.fetched} kept={stats.kept} errors={stats.errors}")

# Two portals answered the next query with one overlapping paper — the
# duplicate collapses and the survivor is chosen deterministically.
rs = run("Big data")
print(f"\n'{rs.query}': {len(rs.records)} records, {rs.dedup_removed} duplicate removed")
for sr in rs.records:
    print(f"  {sr.score:5.2f}  [{sr.record.source_id}] {sr.record.title[:62]}")

# matched_terms explains a score: which expanded terms hit, how often.
top = rs.records[0]
print(f"\nwhy '{top.record.title[:40]}…' scored {top.score}:")
for term, count in sorted(top.matched_terms.items()):
    weight = rs.expanded_terms[term]
    print(f"  '{term}' × {count} at weight {weight}")

# Expansion depth widens recall.  At depth 0 only the literal phrase
# counts; deeper settings pull in subclass terminology.
for depth in (0, 1, 2):
    rs = run("Networking", depth=depth)
    print(f"\ndepth={depth}: {len(rs.expanded_terms)} terms, {len(rs.records)} records")

# No matches is a normal, empty answer — not an error.
rs = run("marine biology of the abyssal plain")
print(f"\noff-topic query: {len(rs.records)} records, "
      f"sources still reporting: {sorted(rs.per_source_stats)}")
