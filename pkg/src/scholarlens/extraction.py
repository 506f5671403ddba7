"""Rule-driven extraction of publication records from portal pages.

The pipeline has two stages.  `extract_entries` applies a declarative
per-source ruleset to a raw HTML or JSON page and yields an intermediate
document of raw field strings; `transform_to_canonical` then types those
strings into `ScholarRecord`s (year parsing, author splitting, stable
record ids).  Rulesets live in small config files next to each source so
adding a portal never means writing code.
"""

from __future__ import annotations

import configparser
import hashlib
import html
import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from .errors import ConfigError, ParseError, RuleCompileError, UnsupportedMediaError
from .htmldom import Element, Selector, compile_selector, parse_html, select
from .text import normalize

logger = logging.getLogger(__name__)

CANONICAL_FIELDS = ("title", "abstract", "authors", "year", "venue", "url")

_YEAR_RE = re.compile(r"(?<!\d)(19\d{2}|20\d{2}|2100)(?!\d)")
_TAG_RE = re.compile(r"<[^>]*>")


@dataclass
class RawDocument:
    """One fetched page, before any interpretation."""

    source_id: str
    url: str
    media_kind: str  # "html" or "json"
    body: bytes
    fetched_at: float = 0.0
    from_cache: bool = False


@dataclass(frozen=True)
class FieldRule:
    """Where to find one field inside a record block, and how to clean it."""

    rule: str
    attribute: Optional[str] = None
    filters: tuple[str, ...] = ()
    join: Optional[str] = None
    compiled: Optional[Selector] = None


@dataclass
class ExtractionRuleSet:
    source_id: str
    media_kind: str
    record_rule: str
    field_rules: dict[str, FieldRule]
    pagination_rule: Optional[FieldRule] = None
    authors_split: str = ";"
    _record_selector: Optional[Selector] = None

    def __post_init__(self) -> None:
        if not self.record_rule:
            raise RuleCompileError("ruleset has no record rule")
        if "title" not in self.field_rules:
            raise RuleCompileError("ruleset defines no title field")
        if self.media_kind == "html":
            self._record_selector = compile_selector(self.record_rule)
        elif self.media_kind != "json":
            raise RuleCompileError(f"unsupported media kind {self.media_kind!r}")


@dataclass
class IntermediateDoc:
    """Raw field strings per entry, in page order, plus extraction warnings."""

    source_id: str
    entries: list[dict[str, str]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class ScholarRecord:
    """The canonical publication record shared by every downstream stage."""

    record_id: str
    source_id: str
    title: str
    abstract: str = ""
    authors: tuple[str, ...] = ()
    year: Optional[int] = None
    venue: Optional[str] = None
    url: Optional[str] = None


def make_record_id(source_id: str, title: str, year: Optional[int]) -> str:
    """First 16 hex digits of sha256 over "source|normalized-title|year"."""
    key = "%s|%s|%s" % (source_id, normalize(title), "" if year is None else year)
    return hashlib.sha256(key.encode("utf-8")).hexdigest()[:16]


_FILTERS = {
    "trim": lambda s: " ".join(s.split()),
    "strip-markup": lambda s: _TAG_RE.sub("", s),
    "decode-entities": html.unescape,
}


def _apply_filters(value: str, filters: tuple[str, ...]) -> str:
    for name in filters:
        value = _FILTERS[name](value)
    return value


def _parse_filters(raw: str) -> tuple[str, ...]:
    names = tuple(part.strip() for part in raw.split(",") if part.strip())
    for name in names:
        if name not in _FILTERS:
            raise RuleCompileError(f"unknown post-filter {name!r}")
    return names


def load_ruleset(path, source_id: str) -> ExtractionRuleSet:
    """Load a per-source ruleset config file.

    Layout: an `[entry]` section with `media` and a `selector` (html) or
    `path` (json) locating each record block; one `[field:<name>]`
    section per extracted field with its own selector/path, optional
    `attribute`, `join`, and comma-separated `filters`; an optional
    `[pagination]` section locating the next-page link.
    """
    path = Path(path)
    parser = configparser.ConfigParser()
    try:
        with path.open(encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read ruleset {path}: {exc}")
    except configparser.Error as exc:
        raise RuleCompileError(f"malformed ruleset {path}: {exc}")

    if not parser.has_section("entry"):
        raise RuleCompileError(f"{path}: missing [entry] section")
    media = parser.get("entry", "media", fallback="html").strip().lower()
    record_rule = parser.get("entry", "selector", fallback=None) or parser.get(
        "entry", "path", fallback=None
    )
    if not record_rule:
        raise RuleCompileError(f"{path}: [entry] needs a selector or path")

    def _field_rule(section: str) -> FieldRule:
        rule = parser.get(section, "selector", fallback=None) or parser.get(
            section, "path", fallback=None
        )
        if not rule:
            raise RuleCompileError(f"{path}: [{section}] needs a selector or path")
        return FieldRule(
            rule=rule.strip(),
            attribute=(parser.get(section, "attribute", fallback=None) or None),
            filters=_parse_filters(parser.get(section, "filters", fallback="")),
            join=parser.get(section, "join", fallback=None),
            compiled=compile_selector(rule) if media == "html" else None,
        )

    field_rules: dict[str, FieldRule] = {}
    for section in parser.sections():
        if section.startswith("field:"):
            name = section[len("field:"):].strip()
            if not name:
                raise RuleCompileError(f"{path}: empty field name")
            field_rules[name] = _field_rule(section)

    pagination = _field_rule("pagination") if parser.has_section("pagination") else None
    authors_split = parser.get("entry", "authors_split", fallback=";")

    return ExtractionRuleSet(
        source_id=source_id,
        media_kind=media,
        record_rule=record_rule.strip(),
        field_rules=field_rules,
        pagination_rule=pagination,
        authors_split=authors_split,
    )


def _subtree_select(block: Element, selector: Selector) -> list[Element]:
    # Match within the block only; ancestor compounds may still look above
    # it, which mirrors how scoped CSS matching behaves.
    return [el for el in block.iter_elements() if el is not block and selector.matches(el)]


def _html_field_value(block: Element, frule: FieldRule) -> Optional[str]:
    matches = _subtree_select(block, frule.compiled)
    values: list[str] = []
    for el in matches:
        raw = el.attrs.get(frule.attribute, "") if frule.attribute else el.get_text()
        raw = _apply_filters(raw, frule.filters)
        if raw:
            values.append(raw)
        if frule.join is None and values:
            break
    if not values:
        return None
    return (frule.join or "; ").join(values) if frule.join is not None else values[0]


def eval_json_path(value: Any, path: str) -> list[Any]:
    """Evaluate a dotted path like `data.results[].title` against a value.

    A `[]` suffix fans out over a list; missing keys simply yield nothing.
    Returns every reached leaf in order.
    """
    current = [value]
    for segment in path.split("."):
        if not segment:
            raise RuleCompileError(f"empty segment in path {path!r}")
        fan_out = segment.endswith("[]")
        name = segment[:-2] if fan_out else segment
        next_values: list[Any] = []
        for item in current:
            if name:
                if not isinstance(item, dict) or name not in item:
                    continue
                item = item[name]
            if fan_out:
                if isinstance(item, list):
                    next_values.extend(item)
            else:
                next_values.append(item)
        current = next_values
    return current


def _json_field_value(entry: Any, frule: FieldRule) -> Optional[str]:
    values: list[str] = []
    for leaf in eval_json_path(entry, frule.rule):
        if isinstance(leaf, list):
            parts = [str(v) for v in leaf if v is not None]
        elif leaf is None:
            continue
        else:
            parts = [str(leaf)]
        for part in parts:
            part = _apply_filters(part, frule.filters)
            if part:
                values.append(part)
    if not values:
        return None
    if frule.join is not None:
        return frule.join.join(values)
    return values[0] if len(values) == 1 else "; ".join(values)


def extract_entries(doc: RawDocument, rules: ExtractionRuleSet) -> IntermediateDoc:
    """Apply a ruleset to one page, yielding raw field strings per record.

    Entries come out in document order; a record block whose title rule
    matches nothing is dropped and noted in `warnings`.
    """
    if rules.source_id != doc.source_id:
        raise ValueError(
            f"ruleset for {rules.source_id!r} applied to document from {doc.source_id!r}"
        )
    if doc.media_kind != rules.media_kind:
        raise UnsupportedMediaError(
            f"ruleset for {rules.source_id!r} handles {rules.media_kind}, got {doc.media_kind}"
        )

    text = doc.body.decode("utf-8", errors="replace")
    idoc = IntermediateDoc(source_id=doc.source_id)

    if rules.media_kind == "html":
        root = parse_html(text)
        blocks: list[Any] = select(root, rules._record_selector)
        getter = _html_field_value
    else:
        try:
            payload = json.loads(text) if text.strip() else []
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON from {doc.url or doc.source_id}: {exc}")
        blocks = eval_json_path(payload, rules.record_rule)
        getter = _json_field_value

    for index, block in enumerate(blocks):
        entry: dict[str, str] = {}
        for name, frule in rules.field_rules.items():
            value = getter(block, frule)
            if value is not None:
                entry[name] = value
        if not entry.get("title"):
            idoc.warnings.append(f"entry {index + 1}: no title extracted; dropped")
            continue
        idoc.entries.append(entry)

    logger.debug(
        "extracted %d/%d entries from %s", len(idoc.entries), len(blocks), doc.url or doc.source_id
    )
    return idoc


def parse_year(raw: str) -> Optional[int]:
    """First plausible 4-digit year token in `raw`, or None."""
    match = _YEAR_RE.search(raw)
    return int(match.group(1)) if match else None


def transform_to_canonical(
    idoc: IntermediateDoc, authors_split: str = ";"
) -> list[ScholarRecord]:
    """Type the raw entries of an intermediate document.

    Unparseable optional fields become absent and append a warning to
    `idoc.warnings`; nothing here ever raises.  Order is preserved and the
    operation is idempotent on already-clean fields.
    """
    records: list[ScholarRecord] = []
    for index, entry in enumerate(idoc.entries):
        title = " ".join(entry["title"].split())
        year: Optional[int] = None
        raw_year = entry.get("year", "").strip()
        if raw_year:
            year = parse_year(raw_year)
            if year is None:
                idoc.warnings.append(
                    f"entry {index + 1}: no year in {raw_year!r}; field dropped"
                )
        authors = tuple(
            part for part in (a.strip() for a in entry.get("authors", "").split(authors_split))
            if part
        )
        venue = entry.get("venue", "").strip() or None
        url = entry.get("url", "").strip() or None
        records.append(
            ScholarRecord(
                record_id=make_record_id(idoc.source_id, title, year),
                source_id=idoc.source_id,
                title=title,
                abstract=entry.get("abstract", "").strip(),
                authors=authors,
                year=year,
                venue=venue,
                url=url,
            )
        )
    return records


def render(records: list[ScholarRecord], format: str = "json") -> bytes:
    """Serialize bare records without search context (thin dispatch)."""
    from .query import ResultSet, ScoredRecord
    from . import serialize

    rs = ResultSet(
        query="",
        depth=0,
        gamma=0.5,
        expanded_terms={},
        records=[ScoredRecord(record=r, score=0.0, matched_terms={}) for r in records],
        per_source_stats={},
        dedup_removed=0,
    )
    if format == "json":
        return serialize.to_json(rs)
    if format == "xml":
        return serialize.to_xml(rs)
    if format == "table":
        return serialize.to_table(rs).encode("utf-8")
    raise ValueError(f"unknown format {format!r}")
