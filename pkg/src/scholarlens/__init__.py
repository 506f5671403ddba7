"""Federated scholarly-metadata search over ontology-expanded queries.

The package turns a keyword query into a set of weighted terms via an
explicit class hierarchy, fans it out to configured portal adapters,
and merges the extracted records into one deduplicated, deterministically
ranked result set renderable as JSON, XML, or a plain-text table.
"""

from .cache import CacheStore
from .config import Engine, ServiceConfig, load_config, load_engine
from .errors import ScholarlensError
from .extraction import (
    ExtractionRuleSet,
    IntermediateDoc,
    RawDocument,
    ScholarRecord,
    extract_entries,
    load_ruleset,
    make_record_id,
    transform_to_canonical,
)
from .ontology import (
    ClassNode,
    ExpandedQuery,
    Ontology,
    ancestors_of,
    children_of,
    descendants_of,
    expand_query,
    load_ontology,
    merge_ontologies,
    parse_ontology,
)
from .query import (
    ResultSet,
    ScoredRecord,
    SearchRequest,
    SourceStats,
    dedup_key,
    dedupe,
    federate_search,
    score_record,
)
from .rdfio import export_rdf, load_rdf, parse_rdf
from .serialize import parse_json, parse_xml, to_json, to_table, to_xml
from .sources import (
    AdapterConfig,
    FetchOutcome,
    SourceRegistry,
    fetch_page,
    list_sources,
    load_registry,
    run_adapter,
)
from .text import normalize, slugify

__version__ = "0.1.0"

__all__ = [
    "AdapterConfig",
    "CacheStore",
    "ClassNode",
    "Engine",
    "ExpandedQuery",
    "ExtractionRuleSet",
    "FetchOutcome",
    "IntermediateDoc",
    "Ontology",
    "RawDocument",
    "ResultSet",
    "ScholarRecord",
    "ScholarlensError",
    "ScoredRecord",
    "SearchRequest",
    "ServiceConfig",
    "SourceRegistry",
    "SourceStats",
    "ancestors_of",
    "children_of",
    "dedup_key",
    "dedupe",
    "descendants_of",
    "expand_query",
    "export_rdf",
    "extract_entries",
    "federate_search",
    "fetch_page",
    "list_sources",
    "load_config",
    "load_engine",
    "load_ontology",
    "load_rdf",
    "load_registry",
    "load_ruleset",
    "make_record_id",
    "merge_ontologies",
    "normalize",
    "parse_json",
    "parse_ontology",
    "parse_rdf",
    "parse_xml",
    "run_adapter",
    "score_record",
    "slugify",
    "to_json",
    "to_table",
    "to_xml",
    "transform_to_canonical",
]
