# Turn one keyword phrase into a weighted term set.
#
# The expander treats the query as a single phrase.  If that phrase names
# a class in the hierarchy, its subclasses join the term set with weights
# that decay by hop count: weight = gamma ** hops, and the minimum hop
# count (maximum weight) wins when several paths reach the same class.

from pathlib import Path

import scholarlens as sl

REPO = Path(__file__).resolve().parents[1]

cs = sl.load_ontology(REPO / "fixtures" / "ontologies" / "cs.onto")

# Depth 0 is the identity: the seed phrase and nothing else.
for depth in (0, 1, 2):
    eq = sl.expand_query(cs, ["networking"], depth=depth, gamma=0.5)
    print(f"depth={depth}: {len(eq.weighted_terms)} terms")

# terms_by_weight() orders by descending weight, ties alphabetical —
# the same order the JSON and XML emitters use.
print("\nexpansion of 'networking' at depth 2, gamma 0.5:")
eq = sl.expand_query(cs, ["networking"], depth=2, gamma=0.5)
for term, weight in eq.terms_by_weight():
    print(f"  {weight:5.2f}  {term}")

# Gamma controls how fast influence fades with distance.  gamma=1 keeps
# every reachable subclass at full weight; small gammas make the seed
# dominate.
print("\nweight of 'cloud security' (2 hops below 'networking'):")
for gamma in (1.0, 0.5, 0.25):
    eq = sl.expand_query(cs, ["networking"], depth=2, gamma=gamma)
    print(f"  gamma={gamma}: {eq.weighted_terms['cloud security']}")

# A phrase the hierarchy does not know passes through untouched — the
# search still runs, just without expansion.
eq = sl.expand_query(cs, ["quantum knitting"], depth=2, gamma=0.5)
print("\nunknown phrase expands to:", dict(eq.weighted_terms))

# Capitalization and stray whitespace never matter; seeds are normalized
# before lookup and always keep weight 1.0.
eq = sl.expand_query(cs, ["  Software   ENGINEERING "], depth=1, gamma=0.5)
print("\nnormalized seed:", eq.seed_terms, "->", len(eq.weighted_terms), "terms")
