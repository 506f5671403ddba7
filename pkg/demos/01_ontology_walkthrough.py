# Walk the bundled class hierarchy: load it, traverse it, merge it,
# and round-trip it through the RDF/XML subset.
#
# Run from anywhere; paths resolve against the repository root.

from pathlib import Path

import scholarlens as sl

REPO = Path(__file__).resolve().parents[1]
ONTODIR = REPO / "fixtures" / "ontologies"

# The native format is line-oriented: `class <id> | <label>` declares a
# class, `sub <child> < <parent>` declares a subclass edge.  Ids are the
# normalized (lowercased, whitespace-folded) labels, so lookups work with
# whatever capitalization the user types.
cs = sl.load_ontology(ONTODIR / "cs.onto")
print(f"loaded {len(cs)} classes from cs.onto")
print("roots:", sorted(cs.root_ids))

# Direct children are a set; order them for display.
for child in sorted(sl.children_of(cs, "computer science")):
    label = cs.nodes[child].label
    grandkids = len(sl.children_of(cs, child))
    print(f"  {label}: {grandkids} direct subclasses")

# descendants_of returns minimum hop counts — the same numbers the query
# expander turns into weights.  Depth limits the walk.
print("\ndescendants of 'networking' within 1 hop:")
for node, hops in sorted(sl.descendants_of(cs, "networking", max_depth=1).items()):
    print(f"  {hops} hop: {node}")

print("\nancestors of 'software quality assurance':")
for node, hops in sorted(sl.ancestors_of(cs, "software quality assurance").items()):
    print(f"  {hops} hop(s) up: {node}")

# The big hierarchy is itself a merge of three independent domain files.
# merge_ontologies refuses overlapping ids, so domains stay disjoint.
domains = [
    sl.load_ontology(ONTODIR / name)
    for name in ("database.onto", "networking.onto", "software_engineering.onto")
]
merged = sl.merge_ontologies("domains", domains)
print(f"\nmerged {len(domains)} domain files into {len(merged)} classes")
print("merged roots:", sorted(merged.root_ids))

# Export to the RDF/XML subclass subset and read it straight back.  The
# round trip preserves classes, labels, and edges exactly.
rdf_text = sl.export_rdf(cs)
again = sl.parse_rdf(rdf_text)
print(f"\nRDF export is {len(rdf_text)} characters; re-import equal:",
      again.structurally_equal(cs))
print("\nfirst lines of the export:")
for line in rdf_text.splitlines()[:6]:
    print("  " + line)
