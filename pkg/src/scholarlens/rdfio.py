"""RDF/XML interchange for class hierarchies.

Only a narrow vocabulary is understood: `rdfs:Class` declarations with an
`rdf:about` identifier, one optional `rdfs:label`, and any number of
`rdfs:subClassOf` edges.  Every other statement is skipped and reported as
a warning on the resulting `Ontology` rather than failing the import.
Exports are deterministic (classes and edges sorted by id) so that
importing an exported document reproduces the same hierarchy.
"""

from __future__ import annotations

import logging
from pathlib import Path
from xml.etree import ElementTree
from xml.sax.saxutils import escape, quoteattr

from .errors import ParseError
from .ontology import Ontology, build_ontology
from .text import normalize

logger = logging.getLogger(__name__)

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"

_RDF = "{%s}RDF" % RDF_NS
_ABOUT = "{%s}about" % RDF_NS
_RESOURCE = "{%s}resource" % RDF_NS
_DESCRIPTION = "{%s}Description" % RDF_NS
_TYPE = "{%s}type" % RDF_NS
_CLASS = "{%s}Class" % RDFS_NS
_LABEL = "{%s}label" % RDFS_NS
_SUBCLASSOF = "{%s}subClassOf" % RDFS_NS


def _local_id(reference: str) -> str:
    """Reduce a URI reference to a bare class id."""
    if "#" in reference:
        reference = reference.rsplit("#", 1)[1]
    elif "/" in reference:
        reference = reference.rsplit("/", 1)[1]
    return normalize(reference)


def parse_rdf(text: str, name: str = "ontology") -> Ontology:
    """Import the restricted RDF/XML subclass vocabulary.

    Unrecognized elements and properties are ignored; each ignored
    statement adds one entry to `Ontology.warnings`.
    """
    try:
        root = ElementTree.fromstring(text)
    except ElementTree.ParseError as exc:
        raise ParseError(f"not well-formed XML: {exc}")
    if root.tag != _RDF:
        raise ParseError(f"expected rdf:RDF document root, got {root.tag!r}")

    declarations: list[tuple[str, str]] = []
    edges: list[tuple[str, str]] = []
    warnings: list[str] = []

    for element in root:
        is_class = element.tag == _CLASS
        if element.tag == _DESCRIPTION:
            # rdf:Description typed as rdfs:Class is the long-hand spelling.
            for child in element.findall(_TYPE):
                if _local_id(child.get(_RESOURCE, "")) == "class":
                    is_class = True
        if not is_class:
            warnings.append(f"ignored element {element.tag}")
            continue

        about = element.get(_ABOUT)
        if about is None:
            raise ParseError("class declaration missing rdf:about")
        node_id = _local_id(about)
        if not node_id:
            raise ParseError(f"class identifier {about!r} normalizes to nothing")

        label = node_id
        for child in element:
            if child.tag == _LABEL:
                label = (child.text or "").strip() or node_id
            elif child.tag == _SUBCLASSOF:
                resource = child.get(_RESOURCE)
                if resource is None:
                    warnings.append(f"ignored rdfs:subClassOf without rdf:resource on {node_id}")
                    continue
                edges.append((node_id, _local_id(resource)))
            elif child.tag == _TYPE:
                pass
            else:
                warnings.append(f"ignored property {child.tag} on {node_id}")

        if normalize(label) != node_id:
            raise ParseError(
                f"class id {node_id!r} does not match normalized label {normalize(label)!r}"
            )
        declarations.append((node_id, label))

    if warnings:
        logger.debug("rdf import skipped %d statements", len(warnings))
    return build_ontology(name, declarations, edges, warnings=warnings)


def load_rdf(source) -> Ontology:
    path = Path(source)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read RDF file {path}: {exc}")
    return parse_rdf(text, name=path.stem)


def export_rdf(o: Ontology) -> str:
    """Serialize an ontology to the same restricted RDF/XML vocabulary.

    Output is deterministic for a given hierarchy, and
    `parse_rdf(export_rdf(o))` is structurally equal to `o`.
    """
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<rdf:RDF xmlns:rdf=%s xmlns:rdfs=%s>' % (quoteattr(RDF_NS), quoteattr(RDFS_NS)),
    ]
    for node_id in sorted(o.nodes):
        node = o.nodes[node_id]
        lines.append("  <rdfs:Class rdf:about=%s>" % quoteattr("#" + node_id))
        lines.append("    <rdfs:label>%s</rdfs:label>" % escape(node.label))
        for parent in sorted(node.parents):
            lines.append("    <rdfs:subClassOf rdf:resource=%s/>" % quoteattr("#" + parent))
        lines.append("  </rdfs:Class>")
    lines.append("</rdf:RDF>")
    return "\n".join(lines) + "\n"
