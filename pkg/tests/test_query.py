"""Search orchestration: validation, scoring, dedup, federation laws."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import scholarlens as sl
from scholarlens.errors import EmptyQueryError, UnknownSourceError
from scholarlens.ontology import ExpandedQuery
from scholarlens.query import _sort_key, dedup_key, dedupe, score_record

from .conftest import search
from .oracles import naive_matched_terms, naive_score


def _record(title, abstract="", source="s", year=None, rid=None):
    return sl.ScholarRecord(
        record_id=rid or sl.make_record_id(source, title, year),
        source_id=source,
        title=title,
        abstract=abstract,
        year=year,
    )


def _eq(weights):
    return ExpandedQuery(
        seed_terms=list(weights)[:1], weighted_terms=weights, depth=1, gamma=0.5
    )


# ------------------------------------------------------------- validation


@pytest.mark.parametrize("bad", ["", "   ", "\t\n"])
def test_blank_query_rejected(bad):
    with pytest.raises(EmptyQueryError):
        sl.SearchRequest(raw_query=bad).validate()


@pytest.mark.parametrize(
    "kwargs",
    [
        {"depth": -1},
        {"gamma": 0.0},
        {"gamma": 1.0001},
        {"gamma": -0.5},
        {"limit": 0},
        {"limit": 1001},
        {"format": "yaml"},
    ],
)
def test_out_of_range_knobs_rejected(kwargs):
    with pytest.raises(ValueError):
        sl.SearchRequest(raw_query="ok", **kwargs).validate()


def test_boundary_knobs_accepted():
    sl.SearchRequest(raw_query="ok", depth=0, gamma=1.0, limit=1000).validate()


# ---------------------------------------------------------------- scoring


def test_title_hits_weigh_triple():
    eq = _eq({"data mining": 1.0})
    in_title = score_record(_record("Data mining methods", ""), eq)
    in_abstract = score_record(_record("Methods", "about data mining"), eq)
    assert in_title.score == 3.0
    assert in_abstract.score == 1.0


def test_weights_scale_contributions():
    eq = _eq({"clustering": 0.25})
    sr = score_record(_record("Clustering survey", "clustering and clustering"), eq)
    assert sr.score == pytest.approx(0.25 * (3 + 2))
    assert sr.matched_terms == {"clustering": 3}


def test_matched_terms_drop_zero_counts():
    eq = _eq({"clustering": 1.0, "networking": 0.5})
    sr = score_record(_record("Clustering survey"), eq)
    assert sr.matched_terms == {"clustering": 1}


def test_no_partial_word_matches():
    eq = _eq({"data": 1.0})
    assert score_record(_record("databases in metadata"), eq).score == 0.0
    assert score_record(_record("data, yes; data."), eq).score == 6.0


def test_scoring_is_case_and_space_insensitive():
    eq = _eq({"Big   Data": 1.0})
    assert score_record(_record("BIG\tDATA rising"), eq).score == 3.0


WORDS = st.sampled_from(["data", "mining", "big", "cloud", "of", "x1", "databases"])
PHRASES = st.lists(WORDS, min_size=1, max_size=3).map(" ".join)
TEXTS = st.lists(WORDS, min_size=0, max_size=12).map(" ".join)


@settings(max_examples=300, deadline=None)
@given(
    title=TEXTS,
    abstract=TEXTS,
    weights=st.dictionaries(PHRASES, st.floats(0.01, 1.0), min_size=1, max_size=4),
)
def test_score_matches_reference_scan(title, abstract, weights):
    sr = score_record(_record(title or "t", abstract), _eq(weights))
    assert sr.score == pytest.approx(naive_score(title or "t", abstract, weights))
    assert sr.matched_terms == naive_matched_terms(title or "t", abstract, weights)


# ------------------------------------------------------------------ dedup


def test_dedup_key_folds_case_and_space():
    assert dedup_key(_record("Big  Data", year=2014)) == "big data|2014"
    assert dedup_key(_record("big data")) == "big data|"


def test_dedupe_keeps_higher_score():
    low = sl.ScoredRecord(record=_record("Same Title", source="b", year=2000), score=1.0)
    high = sl.ScoredRecord(record=_record("same title", source="a", year=2000), score=5.0)
    kept, removed = dedupe([low, high])
    assert kept == [high]
    assert removed == 1


def test_dedupe_tie_prefers_lexicographic_source():
    a = sl.ScoredRecord(record=_record("Same Title", source="beta", year=1), score=2.0)
    b = sl.ScoredRecord(record=_record("Same Title", source="alpha", year=1), score=2.0)
    kept, _ = dedupe([a, b])
    assert kept[0].record.source_id == "alpha"


def test_different_years_are_distinct():
    a = sl.ScoredRecord(record=_record("T", year=2000), score=1.0)
    b = sl.ScoredRecord(record=_record("T", year=2001), score=1.0)
    c = sl.ScoredRecord(record=_record("T"), score=1.0)
    kept, removed = dedupe([a, b, c])
    assert len(kept) == 3
    assert removed == 0


def test_dedupe_output_is_rank_ordered():
    rows = [
        sl.ScoredRecord(record=_record(t, source=s, year=y), score=sc)
        for t, s, y, sc in [
            ("Alpha", "x", 1, 2.0),
            ("Beta", "x", 1, 9.0),
            ("Gamma", "x", 1, 2.0),
            ("alpha", "y", 1, 2.0),
        ]
    ]
    kept, removed = dedupe(rows)
    assert [k.record.title for k in kept] == ["Beta", "Alpha", "Gamma"]
    assert removed == 1
    assert [_sort_key(k) for k in kept] == sorted(_sort_key(k) for k in kept)


# ------------------------------------------------------------- federation


def test_unknown_source_rejected(ontology, registry):
    with pytest.raises(UnknownSourceError):
        search(ontology, registry, "big data", sources=["nope"])


def test_source_order_does_not_matter(ontology, registry):
    forward = search(ontology, registry, "big data", sources=["academic_graph", "fixture_corpus"])
    backward = search(ontology, registry, "big data", sources=["fixture_corpus", "academic_graph"])
    assert forward.records == backward.records
    assert forward.per_source_stats == backward.per_source_stats
    assert forward.dedup_removed == backward.dedup_removed


def test_zero_score_records_dropped(ontology, registry):
    rs = search(ontology, registry, "zebra migration patterns")
    assert rs.records == []
    assert all(s.kept == 0 for s in rs.per_source_stats.values())


def test_limit_truncates_after_ranking(ontology, registry):
    full = search(ontology, registry, "neural networks")
    cut = search(ontology, registry, "neural networks", limit=3)
    assert len(cut.records) == 3
    assert cut.records == full.records[:3]
    assert sum(s.kept for s in cut.per_source_stats.values()) == 3
    assert cut.dedup_removed == full.dedup_removed  # dedup happens before the cut


def test_depth_widens_expansion(ontology, registry):
    shallow = search(ontology, registry, "Networking", depth=1)
    deep = search(ontology, registry, "Networking", depth=2)
    assert len(shallow.expanded_terms) == 8
    assert len(deep.expanded_terms) == 25
    assert set(shallow.expanded_terms) <= set(deep.expanded_terms)


def test_failing_source_isolated(ontology, registry, monkeypatch):
    real = sl.run_adapter

    def flaky(cfg, terms, **kwargs):
        if cfg.source_id == "ieee_xplore":
            raise RuntimeError("connector exploded")
        return real(cfg, terms, **kwargs)

    monkeypatch.setattr("scholarlens.query.run_adapter", flaky)
    rs = search(ontology, registry, "big data")
    assert rs.per_source_stats["ieee_xplore"] == sl.SourceStats(fetched=0, kept=0, errors=1)
    assert rs.records  # the healthy sources still answered


def test_stats_reconcile_with_records(ontology, registry):
    for q in ("big data", "data mining", "remote sensing"):
        rs = search(ontology, registry, q)
        by_source = {}
        for sr in rs.records:
            by_source[sr.record.source_id] = by_source.get(sr.record.source_id, 0) + 1
        for sid, stats in rs.per_source_stats.items():
            assert stats.kept == by_source.get(sid, 0)
            assert stats.fetched >= stats.kept


def test_search_is_idempotent(ontology, registry):
    first = search(ontology, registry, "Reverse Engineering")
    second = search(ontology, registry, "Reverse Engineering")
    assert first == second
