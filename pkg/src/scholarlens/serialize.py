"""Bit-exact renderings of a ResultSet: JSON, XML, and a plain-text table.

These emitters ARE the wire format of the HTTP service, so layout is
fully pinned down: fixed key order, sorted term/source maps, floats with
at most six decimals and never an exponent.  Equal ResultSets always
produce byte-identical output, which is what makes golden-file tests
possible.  `parse_json`/`parse_xml` invert the structured formats.
"""

from __future__ import annotations

import json
from typing import Optional, Sequence
from xml.etree import ElementTree
from xml.sax.saxutils import escape, quoteattr

from .errors import ParseError, UnknownColumnError
from .extraction import ScholarRecord
from .query import ResultSet, ScoredRecord, SourceStats
from .text import format_float

TABLE_COLUMNS = ("record_id", "source", "title", "abstract", "authors", "year", "venue", "url", "score")
DEFAULT_COLUMNS = ("title", "abstract")
TRUNCATION_MARK = "…"


def _jstr(s: str) -> str:
    return json.dumps(s, ensure_ascii=False)


def _jopt(s: Optional[str]) -> str:
    return "null" if s is None else _jstr(s)


def _sorted_terms(terms: dict[str, float]) -> list[tuple[str, float]]:
    return sorted(terms.items(), key=lambda kv: (-kv[1], kv[0]))


def to_json(rs: ResultSet) -> bytes:
    """Render the fixed-schema JSON envelope as UTF-8 bytes."""
    parts: list[str] = []
    parts.append('{"query":%s' % _jstr(rs.query))
    parts.append(',"depth":%d' % rs.depth)
    parts.append(',"gamma":%s' % format_float(rs.gamma))
    terms = ",".join(
        "%s:%s" % (_jstr(t), format_float(w)) for t, w in _sorted_terms(rs.expanded_terms)
    )
    parts.append(',"expanded_terms":{%s}' % terms)
    parts.append(',"count":%d' % len(rs.records))
    parts.append(',"dedup_removed":%d' % rs.dedup_removed)
    sources = ",".join(
        '%s:{"fetched":%d,"kept":%d,"errors":%d}'
        % (_jstr(sid), st.fetched, st.kept, st.errors)
        for sid, st in sorted(rs.per_source_stats.items())
    )
    parts.append(',"per_source":{%s}' % sources)
    parts.append(',"records":[')
    for index, sr in enumerate(rs.records):
        r = sr.record
        if index:
            parts.append(",")
        authors = ",".join(_jstr(a) for a in r.authors)
        matched = ",".join(
            "%s:%d" % (_jstr(t), c) for t, c in sorted(sr.matched_terms.items())
        )
        parts.append(
            '{"record_id":%s,"source":%s,"title":%s,"abstract":%s,"authors":[%s],'
            '"year":%s,"venue":%s,"url":%s,"score":%s,"matched_terms":{%s}}'
            % (
                _jstr(r.record_id),
                _jstr(r.source_id),
                _jstr(r.title),
                _jstr(r.abstract),
                authors,
                "null" if r.year is None else str(r.year),
                _jopt(r.venue),
                _jopt(r.url),
                format_float(sr.score),
                matched,
            )
        )
    parts.append("]}")
    return "".join(parts).encode("utf-8")


def parse_json(data: bytes) -> ResultSet:
    """Rebuild a ResultSet from `to_json` output."""
    try:
        payload = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"invalid result JSON: {exc}")
    records = []
    for obj in payload.get("records", []):
        record = ScholarRecord(
            record_id=obj["record_id"],
            source_id=obj["source"],
            title=obj["title"],
            abstract=obj.get("abstract") or "",
            authors=tuple(obj.get("authors") or ()),
            year=obj.get("year"),
            venue=obj.get("venue"),
            url=obj.get("url"),
        )
        records.append(
            ScoredRecord(
                record=record,
                score=float(obj["score"]),
                matched_terms={t: int(c) for t, c in obj.get("matched_terms", {}).items()},
            )
        )
    stats = {
        sid: SourceStats(fetched=st["fetched"], kept=st["kept"], errors=st["errors"])
        for sid, st in payload.get("per_source", {}).items()
    }
    return ResultSet(
        query=payload["query"],
        depth=int(payload["depth"]),
        gamma=float(payload["gamma"]),
        expanded_terms={t: float(w) for t, w in payload.get("expanded_terms", {}).items()},
        records=records,
        per_source_stats=stats,
        dedup_removed=int(payload.get("dedup_removed", 0)),
    )


def _xml_text_element(indent: str, tag: str, text: Optional[str]) -> str:
    if text is None or text == "":
        return "%s<%s/>" % (indent, tag)
    return "%s<%s>%s</%s>" % (indent, tag, escape(text), tag)


def to_xml(rs: ResultSet) -> bytes:
    """Render the XML form: expanded terms, then one element per record.

    Absent optional fields come out as empty elements; per-term match
    counts are a JSON-only detail and are not repeated here.
    """
    lines = ['<?xml version="1.0" encoding="UTF-8"?>']
    lines.append(
        "<results query=%s count=%s dedup_removed=%s>"
        % (quoteattr(rs.query), quoteattr(str(len(rs.records))), quoteattr(str(rs.dedup_removed)))
    )
    if rs.expanded_terms:
        lines.append("  <expanded>")
        for term, weight in _sorted_terms(rs.expanded_terms):
            lines.append(
                "    <term name=%s weight=%s/>" % (quoteattr(term), quoteattr(format_float(weight)))
            )
        lines.append("  </expanded>")
    else:
        lines.append("  <expanded/>")
    for sr in rs.records:
        r = sr.record
        lines.append(
            "  <record id=%s source=%s score=%s>"
            % (quoteattr(r.record_id), quoteattr(r.source_id), quoteattr(format_float(sr.score)))
        )
        lines.append(_xml_text_element("    ", "title", r.title))
        lines.append(_xml_text_element("    ", "abstract", r.abstract))
        if r.authors:
            lines.append("    <authors>")
            for author in r.authors:
                lines.append(_xml_text_element("      ", "author", author))
            lines.append("    </authors>")
        else:
            lines.append("    <authors/>")
        lines.append(_xml_text_element("    ", "year", None if r.year is None else str(r.year)))
        lines.append(_xml_text_element("    ", "venue", r.venue))
        lines.append(_xml_text_element("    ", "url", r.url))
        lines.append("  </record>")
    lines.append("</results>")
    return ("\n".join(lines) + "\n").encode("utf-8")


def parse_xml(data: bytes) -> ResultSet:
    """Rebuild a ResultSet from `to_xml` output.

    Fields the XML schema does not carry (depth, gamma, per-source stats,
    matched terms) come back as empty defaults.
    """
    try:
        root = ElementTree.fromstring(data)
    except ElementTree.ParseError as exc:
        raise ParseError(f"invalid result XML: {exc}")
    if root.tag != "results":
        raise ParseError(f"expected <results> root, got <{root.tag}>")
    expanded: dict[str, float] = {}
    expanded_el = root.find("expanded")
    if expanded_el is not None:
        for term_el in expanded_el.findall("term"):
            expanded[term_el.get("name", "")] = float(term_el.get("weight", "0"))
    records: list[ScoredRecord] = []
    for rec_el in root.findall("record"):
        def _text(tag: str) -> str:
            el = rec_el.find(tag)
            return (el.text or "") if el is not None else ""

        year_text = _text("year")
        authors_el = rec_el.find("authors")
        authors = tuple(
            (a.text or "") for a in (authors_el.findall("author") if authors_el is not None else [])
        )
        record = ScholarRecord(
            record_id=rec_el.get("id", ""),
            source_id=rec_el.get("source", ""),
            title=_text("title"),
            abstract=_text("abstract"),
            authors=authors,
            year=int(year_text) if year_text else None,
            venue=_text("venue") or None,
            url=_text("url") or None,
        )
        records.append(
            ScoredRecord(record=record, score=float(rec_el.get("score", "0")), matched_terms={})
        )
    declared = int(root.get("count", str(len(records))))
    if declared != len(records):
        raise ParseError(f"count attribute {declared} != {len(records)} record elements")
    return ResultSet(
        query=root.get("query", ""),
        depth=0,
        gamma=0.5,
        expanded_terms=expanded,
        records=records,
        per_source_stats={},
        dedup_removed=int(root.get("dedup_removed", "0")),
    )


def _cell_value(sr: ScoredRecord, column: str) -> str:
    r = sr.record
    if column == "record_id":
        return r.record_id
    if column == "source":
        return r.source_id
    if column == "title":
        return r.title
    if column == "abstract":
        return r.abstract
    if column == "authors":
        return "; ".join(r.authors)
    if column == "year":
        return "" if r.year is None else str(r.year)
    if column == "venue":
        return r.venue or ""
    if column == "url":
        return r.url or ""
    if column == "score":
        return format_float(sr.score)
    raise UnknownColumnError(column)


def _clip(cell: str, max_width: int) -> str:
    if len(cell) <= max_width:
        return cell
    if max_width <= len(TRUNCATION_MARK):
        return TRUNCATION_MARK[:max_width]
    return cell[: max_width - len(TRUNCATION_MARK)] + TRUNCATION_MARK


def to_table(
    rs: ResultSet,
    columns: Sequence[str] = DEFAULT_COLUMNS,
    max_width: int = 60,
) -> str:
    """Plain-text table: header plus one row per record.

    Cells longer than `max_width` are cut to exactly `max_width`
    characters including the truncation mark.
    """
    if max_width < 1:
        raise ValueError("max_width must be positive")
    for column in columns:
        if column not in TABLE_COLUMNS:
            raise UnknownColumnError(column)
    lines = [" | ".join(_clip(col.capitalize(), max_width) for col in columns)]
    for sr in rs.records:
        lines.append(" | ".join(_clip(_cell_value(sr, col), max_width) for col in columns))
    return "\n".join(lines) + "\n"
