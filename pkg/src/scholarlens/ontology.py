"""Class-hierarchy ontologies: loading, validation, traversal, query expansion.

The native on-disk format is deliberately small.  One statement per line:

    class <id> | <Display Label>
    sub <child-id> < <parent-id>

`#` starts a comment, ids are the normalized form of their labels, and a
file may declare several roots.  Everything else (RDF/XML interchange) is
handled by the `rdfio` module on top of the same `Ontology` type.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Optional

from .errors import (
    CycleError,
    DanglingParentError,
    DuplicateIdError,
    EmptyQueryError,
    ParseError,
    UnknownClassError,
)
from .text import normalize

logger = logging.getLogger(__name__)


@dataclass
class ClassNode:
    """One concept in the hierarchy.

    `id` is always `normalize(label)`; `parents` holds ids of direct
    superclasses; `annotations` carries free-form tags (property kinds and
    the like) with no semantics attached.
    """

    id: str
    label: str
    parents: set[str] = field(default_factory=set)
    annotations: dict[str, str] = field(default_factory=dict)


@dataclass
class Ontology:
    """A validated, acyclic subclass hierarchy.

    Treated as immutable after construction; concurrent reads are safe.
    `children_index` is derived and always the exact inverse of the
    `parents` relation.
    """

    name: str
    nodes: dict[str, ClassNode]
    root_ids: set[str]
    children_index: dict[str, set[str]]
    warnings: tuple[str, ...] = ()

    def __contains__(self, node_id: str) -> bool:
        return node_id in self.nodes

    def __len__(self) -> int:
        return len(self.nodes)

    def labels(self) -> dict[str, str]:
        return {nid: n.label for nid, n in self.nodes.items()}

    def structurally_equal(self, other: "Ontology") -> bool:
        """Same nodes, labels, and edges; name and warnings are ignored."""
        if set(self.nodes) != set(other.nodes):
            return False
        for nid, node in self.nodes.items():
            onode = other.nodes[nid]
            if node.label != onode.label or node.parents != onode.parents:
                return False
        return True


@dataclass
class ExpandedQuery:
    """Seed terms plus ontology-derived terms with hop-decayed weights.

    Invariants: every seed carries weight exactly 1.0, every other weight
    is gamma**k for some hop count k in [1, depth], and growing `depth`
    only ever adds terms.
    """

    seed_terms: list[str]
    weighted_terms: dict[str, float]
    depth: int
    gamma: float

    def terms_by_weight(self) -> list[tuple[str, float]]:
        """Terms sorted by weight descending, then term ascending."""
        return sorted(self.weighted_terms.items(), key=lambda kv: (-kv[1], kv[0]))


def build_ontology(
    name: str,
    declarations: Iterable[tuple[str, str]],
    edges: Iterable[tuple[str, str]],
    annotations: Optional[Mapping[str, dict[str, str]]] = None,
    warnings: Iterable[str] = (),
) -> Ontology:
    """Assemble and validate an Ontology from parsed statements.

    `declarations` yields (id, label) pairs, `edges` yields
    (child-id, parent-id) pairs.  Raises DuplicateIdError,
    DanglingParentError, or CycleError when the input breaks an invariant.
    """
    annotations = annotations or {}
    nodes: dict[str, ClassNode] = {}
    for node_id, label in declarations:
        if node_id in nodes:
            raise DuplicateIdError(node_id)
        nodes[node_id] = ClassNode(
            id=node_id, label=label, annotations=dict(annotations.get(node_id, {}))
        )

    for child, parent in edges:
        if child not in nodes:
            raise DanglingParentError(child)
        if parent not in nodes:
            raise DanglingParentError(parent, child_id=child)
        nodes[child].parents.add(parent)

    children_index: dict[str, set[str]] = {nid: set() for nid in nodes}
    for node in nodes.values():
        for parent in node.parents:
            children_index[parent].add(node.id)

    _check_acyclic(nodes)
    root_ids = {nid for nid, node in nodes.items() if not node.parents}
    return Ontology(
        name=name,
        nodes=nodes,
        root_ids=root_ids,
        children_index=children_index,
        warnings=tuple(warnings),
    )


def _check_acyclic(nodes: dict[str, ClassNode]) -> None:
    # Iterative three-color DFS over parent edges; recursion would overflow
    # on deep chains.
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {nid: WHITE for nid in nodes}
    for start in nodes:
        if color[start] != WHITE:
            continue
        stack = [(start, iter(nodes[start].parents))]
        color[start] = GRAY
        while stack:
            nid, parents = stack[-1]
            advanced = False
            for parent in parents:
                if color[parent] == GRAY:
                    raise CycleError(parent)
                if color[parent] == WHITE:
                    color[parent] = GRAY
                    stack.append((parent, iter(nodes[parent].parents)))
                    advanced = True
                    break
            if not advanced:
                color[nid] = BLACK
                stack.pop()


def parse_ontology(text: str, name: str = "ontology") -> Ontology:
    """Parse the native line-oriented format into a validated Ontology."""
    declarations: list[tuple[str, str]] = []
    edges: list[tuple[str, str]] = []
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("class "):
            body = line[len("class "):]
            if "|" in body:
                id_part, label = (part.strip() for part in body.split("|", 1))
            else:
                id_part, label = body.strip(), body.strip()
            node_id = normalize(id_part)
            if not node_id:
                raise ParseError("empty class id", line=lineno)
            if node_id != normalize(label):
                raise ParseError(
                    f"class id {node_id!r} does not match normalized label {normalize(label)!r}",
                    line=lineno,
                )
            declarations.append((node_id, label))
        elif line.startswith("sub "):
            body = line[len("sub "):]
            if "<" not in body:
                raise ParseError("sub statement must be '<child> < <parent>'", line=lineno)
            child, parent = (normalize(part) for part in body.split("<", 1))
            if not child or not parent:
                raise ParseError("sub statement has an empty side", line=lineno)
            edges.append((child, parent))
        else:
            raise ParseError(f"unrecognized statement {line.split()[0]!r}", line=lineno)
    return build_ontology(name, declarations, edges)


def load_ontology(source) -> Ontology:
    """Load and validate an ontology file in the native format."""
    path = Path(source)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read ontology file {path}: {exc}")
    onto = parse_ontology(text, name=path.stem)
    logger.debug("loaded ontology %s: %d classes", onto.name, len(onto))
    return onto


def merge_ontologies(name: str, ontologies: Iterable[Ontology]) -> Ontology:
    """Union of several ontologies; duplicate ids must agree on label."""
    declarations: dict[str, str] = {}
    edges: set[tuple[str, str]] = set()
    for onto in ontologies:
        for node in onto.nodes.values():
            if node.id in declarations and declarations[node.id] != node.label:
                raise DuplicateIdError(node.id)
            declarations.setdefault(node.id, node.label)
            for parent in node.parents:
                edges.add((node.id, parent))
    return build_ontology(name, declarations.items(), sorted(edges))


def _require(o: Ontology, node_id: str) -> str:
    node_id = normalize(node_id)
    if node_id not in o.nodes:
        raise UnknownClassError(node_id)
    return node_id


def children_of(o: Ontology, node_id: str) -> set[str]:
    """Direct subclass ids of `node_id`; never contains the node itself."""
    return set(o.children_index[_require(o, node_id)])


def parents_of(o: Ontology, node_id: str) -> set[str]:
    return set(o.nodes[_require(o, node_id)].parents)


def _bfs(start: str, neighbours, max_depth: Optional[int]) -> dict[str, int]:
    hops: dict[str, int] = {}
    frontier = deque([(start, 0)])
    seen = {start}
    while frontier:
        nid, dist = frontier.popleft()
        if max_depth is not None and dist >= max_depth:
            continue
        for nxt in neighbours(nid):
            if nxt not in seen:
                seen.add(nxt)
                hops[nxt] = dist + 1
                frontier.append((nxt, dist + 1))
    return hops


def descendants_of(o: Ontology, node_id: str, max_depth: Optional[int] = None) -> dict[str, int]:
    """Minimum-hop closure over subclass edges, excluding the node itself.

    `max_depth=None` means unbounded.
    """
    node_id = _require(o, node_id)
    if max_depth is not None and max_depth < 1:
        raise ValueError("max_depth must be positive or None")
    return _bfs(node_id, lambda nid: o.children_index[nid], max_depth)


def ancestors_of(o: Ontology, node_id: str) -> dict[str, int]:
    """Minimum-hop closure over parent edges."""
    node_id = _require(o, node_id)
    return _bfs(node_id, lambda nid: o.nodes[nid].parents, None)


def expand_query(
    o: Ontology, seeds: Iterable[str], depth: int = 2, gamma: float = 0.5
) -> ExpandedQuery:
    """Expand seed terms along subclass edges with hop-decayed weights.

    Each normalized seed gets weight 1.0.  A seed that names an ontology
    class contributes its descendants up to `depth` hops at weight
    gamma**hop; when a term is reachable from several seeds or along
    several paths, the maximum weight (minimum hop count) wins.  Seeds
    absent from the ontology pass through unexpanded.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    if not (0.0 < gamma <= 1.0):
        raise ValueError("gamma must be in (0, 1]")

    seed_terms: list[str] = []
    for seed in seeds:
        norm = normalize(seed)
        if norm and norm not in seed_terms:
            seed_terms.append(norm)
    if not seed_terms:
        raise EmptyQueryError()

    weighted: dict[str, float] = {seed: 1.0 for seed in seed_terms}
    if depth > 0:
        for seed in seed_terms:
            if seed not in o.nodes:
                continue
            for term, hop in descendants_of(o, seed, max_depth=depth).items():
                weight = gamma ** hop
                if term not in weighted or weight > weighted[term]:
                    weighted[term] = weight
    # Seeds always win over any expansion path that reaches them.
    for seed in seed_terms:
        weighted[seed] = 1.0

    return ExpandedQuery(
        seed_terms=seed_terms, weighted_terms=weighted, depth=depth, gamma=gamma
    )
