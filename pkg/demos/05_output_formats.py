# One result set, three renderings: JSON, XML, and a plain-text table.
#
# The emitters are byte-deterministic — fixed key order, sorted maps,
# floats without exponents — which is what lets the HTTP service promise
# stable output and lets tests pin golden files.

from pathlib import Path

import scholarlens as sl

REPO = Path(__file__).resolve().parents[1]

ontology = sl.load_ontology(REPO / "fixtures" / "ontologies" / "cs.onto")
registry = sl.load_registry(REPO / "sources")
rs = sl.federate_search(
    sl.SearchRequest(raw_query="Big data", limit=3), ontology, registry
)

# JSON: the primary wire format.  Everything is here — expansion weights,
# per-source stats, per-term match counts.
body = sl.to_json(rs)
print(f"JSON: {len(body)} bytes, starts with:")
print("  " + body[:76].decode() + "…")

# The JSON reader inverts the writer exactly.
assert sl.parse_json(body) == rs
print("parse_json(to_json(rs)) == rs: True")

# Byte determinism: serializing the same result twice is identical.
print("byte-stable:", sl.to_json(rs) == body)

# XML: same records, attribute-carried scores, empty elements for absent
# fields.  Per-term counts and per-source stats are JSON-only details.
xml = sl.to_xml(rs)
print("\nXML, first lines:")
for line in xml.decode().splitlines()[:8]:
    print("  " + line)

# Table: for terminals.  Cells clip to an exact width with an ellipsis;
# pick any subset of columns.
print("\ntable, default columns:")
print(sl.to_table(rs, max_width=46))

print("table, custom columns:")
print(sl.to_table(rs, columns=("score", "source", "title"), max_width=40))

# The same three formats are what the HTTP API serves:
#   GET /api/search?q=Big+data&format=json   (application/json)
#   GET /api/search?q=Big+data&format=xml    (application/xml)
#   GET /api/search?q=Big+data&format=table  (text/plain)
# and what the command line prints:
#   scholarlens search "Big data" --format table
