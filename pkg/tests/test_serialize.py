"""Wire formats: pinned JSON layout, XML rendering, table clipping."""

import json
import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import scholarlens as sl
from scholarlens.errors import ParseError, UnknownColumnError
from scholarlens.serialize import DEFAULT_COLUMNS, TRUNCATION_MARK, to_table

from .conftest import search


def _rs(**overrides):
    record = sl.ScholarRecord(
        record_id="deadbeefdeadbeef",
        source_id="portal",
        title="Data mining with big data",
        abstract="Big Data concern large-volume data sets",
        authors=("Xindong Wu", "Xingquan Zhu"),
        year=2014,
        venue="IEEE TKDE",
        url="http://portal.test/1",
    )
    base = dict(
        query="big data",
        depth=1,
        gamma=0.5,
        expanded_terms={"big data": 1.0, "data stream": 0.5, "cloud computing": 0.5},
        records=[
            sl.ScoredRecord(record=record, score=5.0, matched_terms={"big data": 2}),
            sl.ScoredRecord(
                record=sl.ScholarRecord(
                    record_id="feedfacefeedface",
                    source_id="portal",
                    title="Untitled follow-up",
                ),
                score=1.25,
                matched_terms={},
            ),
        ],
        per_source_stats={
            "zeta": sl.SourceStats(fetched=3, kept=1, errors=0),
            "alpha": sl.SourceStats(fetched=2, kept=1, errors=1),
        },
        dedup_removed=4,
    )
    base.update(overrides)
    return sl.ResultSet(**base)


# ------------------------------------------------------------------- JSON


def test_json_envelope_key_order():
    body = sl.to_json(_rs()).decode()
    keys = ["query", "depth", "gamma", "expanded_terms", "count", "dedup_removed", "per_source", "records"]
    positions = [body.index('"%s":' % k) for k in keys]
    assert positions == sorted(positions)
    assert body.startswith('{"query":"big data","depth":1,"gamma":0.5,')


def test_json_record_key_order():
    body = sl.to_json(_rs()).decode()
    record_keys = ["record_id", "source", "title", "abstract", "authors", "year", "venue", "url", "score", "matched_terms"]
    first_record = body[body.index('"records":[') :]
    positions = [first_record.index('"%s":' % k) for k in record_keys]
    assert positions == sorted(positions)


def test_json_terms_sorted_by_weight_then_name():
    body = sl.to_json(_rs()).decode()
    inner = body.split('"expanded_terms":{', 1)[1].split("}", 1)[0]
    assert inner == '"big data":1.0,"cloud computing":0.5,"data stream":0.5'


def test_json_per_source_key_sorted():
    body = sl.to_json(_rs()).decode()
    assert body.index('"alpha"') < body.index('"zeta"')


def test_json_is_compact_and_parseable():
    body = sl.to_json(_rs())
    assert b": " not in body and b", " not in body
    payload = json.loads(body)
    assert payload["count"] == 2
    assert payload["records"][1]["year"] is None
    assert payload["records"][1]["venue"] is None


def test_json_floats_never_use_exponent():
    rs = _rs()
    rs.records[0].score = 1e-05
    body = sl.to_json(rs).decode()
    assert "e" not in re.sub(r'"[^"]*"', "", body)  # outside quoted strings
    assert '"score":0.00001,' in body


def test_json_integral_floats_keep_dot_zero():
    body = sl.to_json(_rs()).decode()
    assert '"score":5.0,' in body
    assert '"gamma":0.5,' in body


def test_json_preserves_unicode_unescaped():
    rs = _rs(query="naïve Bayes — überblick")
    assert "naïve Bayes — überblick".encode("utf-8") in sl.to_json(rs)


def test_json_round_trip_identity():
    rs = _rs()
    assert sl.parse_json(sl.to_json(rs)) == rs


def test_parse_json_rejects_garbage():
    with pytest.raises(ParseError):
        sl.parse_json(b"{not json")


# -------------------------------------------------------------------- XML


def test_xml_shape():
    lines = sl.to_xml(_rs()).decode().split("\n")
    assert lines[0] == '<?xml version="1.0" encoding="UTF-8"?>'
    assert lines[1] == '<results query="big data" count="2" dedup_removed="4">'
    assert lines[2] == "  <expanded>"
    assert lines[3] == '    <term name="big data" weight="1.0"/>'
    assert lines[-2] == "</results>"
    assert lines[-1] == ""  # trailing newline


def test_xml_absent_fields_self_close():
    body = sl.to_xml(_rs()).decode()
    assert "<year/>" in body and "<venue/>" in body and "<url/>" in body
    assert "<authors/>" in body and "<abstract/>" in body


def test_xml_omits_json_only_details():
    body = sl.to_xml(_rs()).decode()
    assert "matched" not in body
    assert "per_source" not in body and "fetched" not in body


def test_xml_escapes_text_and_attributes():
    rs = _rs(query='q "with" <angles> & ampersand')
    rs.records[0].record = sl.ScholarRecord(
        record_id="x", source_id="s", title="Tags <b> & entities"
    )
    body = sl.to_xml(rs).decode()
    assert "<title>Tags &lt;b&gt; &amp; entities</title>" in body
    assert "&lt;angles&gt;" in body


def test_xml_round_trip_of_carried_fields():
    rs = _rs()
    back = sl.parse_xml(sl.to_xml(rs))
    assert back.query == rs.query
    assert back.dedup_removed == rs.dedup_removed
    assert back.expanded_terms == rs.expanded_terms
    assert [s.record for s in back.records] == [s.record for s in rs.records]
    assert [s.score for s in back.records] == [s.score for s in rs.records]


def test_parse_xml_rejects_wrong_root_and_bad_count():
    with pytest.raises(ParseError):
        sl.parse_xml(b"<nope/>")
    with pytest.raises(ParseError):
        sl.parse_xml(b'<results query="q" count="7" dedup_removed="0"><expanded/></results>')


# ------------------------------------------------------------------ table


def test_table_default_columns_and_separator():
    text = to_table(_rs())
    lines = text.strip().split("\n")
    assert lines[0] == "Title | Abstract"
    assert len(lines) == 3
    assert lines[1].startswith("Data mining with big data | Big Data concern")


def test_table_clips_to_exact_width():
    text = to_table(_rs(), columns=("title",), max_width=10)
    rows = text.strip().split("\n")
    assert rows[1] == "Data mini" + TRUNCATION_MARK
    assert len(rows[1]) == 10


def test_table_short_cells_not_padded():
    text = to_table(_rs(), columns=("year", "score"), max_width=40)
    assert text.strip().split("\n")[1] == "2014 | 5.0"


def test_table_width_one_is_just_the_mark():
    text = to_table(_rs(), columns=("title",), max_width=1)
    assert text.strip().split("\n")[1] == TRUNCATION_MARK


def test_table_unknown_column_rejected():
    with pytest.raises(UnknownColumnError):
        to_table(_rs(), columns=("title", "citations"))


def test_table_joins_authors():
    text = to_table(_rs(), columns=("authors",), max_width=60)
    assert text.split("\n")[1] == "Xindong Wu; Xingquan Zhu"


def test_default_columns_constant():
    assert DEFAULT_COLUMNS == ("title", "abstract")


# ----------------------------------------------------- format agreement


def test_formats_agree_on_engine_output(ontology, registry):
    rs = search(ontology, registry, "Reverse Engineering")
    as_json = json.loads(sl.to_json(rs))
    from_xml = sl.parse_xml(sl.to_xml(rs))
    table = to_table(rs, columns=("record_id",), max_width=20)

    json_ids = [r["record_id"] for r in as_json["records"]]
    xml_ids = [s.record.record_id for s in from_xml.records]
    table_ids = table.strip().split("\n")[1:]
    assert json_ids == xml_ids == table_ids
    assert as_json["count"] == len(xml_ids)


# -------------------------------------------------------------- properties

_EXACT = st.integers(0, 640).map(lambda n: n / 64)  # ≤6 decimals, binary-exact
_NAME = st.text(
    st.characters(min_codepoint=0x20, blacklist_categories=("Cs",), blacklist_characters='"\\'),
    min_size=1,
    max_size=12,
)
_XMLSAFE = st.text(st.characters(min_codepoint=0x20, max_codepoint=0x2FFF), max_size=20)


@st.composite
def result_sets(draw):
    records = []
    for i in range(draw(st.integers(0, 4))):
        record = sl.ScholarRecord(
            record_id=f"{i:016x}",
            source_id=draw(_NAME),
            title=draw(_XMLSAFE) or "t",
            abstract=draw(_XMLSAFE),
            authors=tuple(draw(st.lists(_XMLSAFE.filter(bool), max_size=3))),
            year=draw(st.none() | st.integers(1900, 2100)),
            venue=draw(st.none() | _XMLSAFE.filter(bool)),
            url=draw(st.none() | _XMLSAFE.filter(bool)),
        )
        records.append(
            sl.ScoredRecord(
                record=record,
                score=draw(_EXACT),
                matched_terms=draw(st.dictionaries(_NAME, st.integers(1, 9), max_size=3)),
            )
        )
    return sl.ResultSet(
        query=draw(_XMLSAFE) or "q",
        depth=draw(st.integers(0, 3)),
        gamma=draw(st.integers(1, 64).map(lambda n: n / 64)),
        expanded_terms=draw(st.dictionaries(_NAME, _EXACT.filter(bool), max_size=5)),
        records=records,
        per_source_stats=draw(
            st.dictionaries(
                _NAME,
                st.builds(
                    sl.SourceStats,
                    fetched=st.integers(0, 9),
                    kept=st.integers(0, 9),
                    errors=st.integers(0, 2),
                ),
                max_size=3,
            )
        ),
        dedup_removed=draw(st.integers(0, 9)),
    )


@settings(max_examples=150, deadline=None)
@given(result_sets())
def test_json_round_trip_property(rs):
    assert sl.parse_json(sl.to_json(rs)) == rs


@settings(max_examples=150, deadline=None)
@given(result_sets())
def test_equal_sets_serialize_identically(rs):
    import copy

    clone = copy.deepcopy(rs)
    assert sl.to_json(rs) == sl.to_json(clone)
    assert sl.to_xml(rs) == sl.to_xml(clone)
