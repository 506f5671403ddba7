"""Shared fixtures: the repo corpus, loaded once per session."""

from __future__ import annotations

from pathlib import Path

import pytest

import scholarlens as sl

REPO = Path(__file__).resolve().parents[1]

# The fourteen demo query strings the fixture corpus answers.
SAMPLE_QUERIES = (
    "Computer of science",
    "Reverse Engineering",
    "Remote Sensing",
    "Software Quality Assurance",
    "Neural Networks",
    "Networking",
    "Modeling",
    "Data Mining",
    "Computer Graphics",
    "Clustering",
    "Cloud Computing",
    "Big data",
    "Application Programming Interface",
    "Artificial Intelligence",
)


@pytest.fixture(scope="session")
def ontology() -> sl.Ontology:
    return sl.load_ontology(REPO / "fixtures/ontologies/cs.onto")


@pytest.fixture(scope="session")
def registry() -> sl.SourceRegistry:
    return sl.load_registry(REPO / "sources")


@pytest.fixture(scope="session")
def corpus_records(registry) -> list[sl.ScholarRecord]:
    """Every record extractable from every shipped fixture page."""
    records: list[sl.ScholarRecord] = []
    for sid, cfg in registry.configs.items():
        for slug_dir in sorted(cfg.fixtures_dir.iterdir()):
            if not slug_dir.is_dir():
                continue
            terms = slug_dir.name.split("-")
            outcome = sl.run_adapter(cfg, terms, ruleset=registry.rulesets[sid])
            assert not outcome.errors, (sid, slug_dir.name, outcome.errors)
            records.extend(outcome.records)
    assert records
    return records


def search(ontology, registry, query: str, **kwargs) -> sl.ResultSet:
    req = sl.SearchRequest(raw_query=query, **kwargs)
    return sl.federate_search(req, ontology, registry)
