"""Portal adapters: configured connectors that turn a term list into records.

Each source lives in its own directory holding an `adapter.conf` (where
and how to fetch), a `rules.conf` (how to extract), and — for fixture
mode — stored result pages under `fixtures/<query-slug>/page<N>.html` or
`.json`.  Fixture mode is the tested default; live mode reuses exactly
the same extraction path against real HTTP responses.
"""

from __future__ import annotations

import configparser
import logging
import time
import urllib.parse
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

from .cache import CacheStore
from .errors import (
    ConfigError,
    HttpStatusError,
    RequestTimeoutError,
    ScholarlensError,
    UnknownSourceError,
)
from .extraction import (
    ExtractionRuleSet,
    RawDocument,
    ScholarRecord,
    extract_entries,
    load_ruleset,
    transform_to_canonical,
)
from .htmldom import parse_html, select
from .text import slugify

logger = logging.getLogger(__name__)

# transport(url, timeout_s, headers) -> (status, content_type, body)
Transport = Callable[[str, float, dict], tuple[int, str, bytes]]


@dataclass
class AdapterConfig:
    """Everything needed to query one portal."""

    source_id: str
    display_name: str
    base_url: str
    query_template: str
    ruleset_path: Path
    fixtures_dir: Optional[Path] = None
    max_pages: int = 3
    timeout_ms: int = 10_000
    min_request_interval_ms: int = 0
    mode: str = "fixture"
    header: Optional[tuple[str, str]] = None

    def __post_init__(self) -> None:
        if "{terms}" not in self.query_template:
            raise ConfigError(
                f"source {self.source_id!r}: query_template lacks a {{terms}} placeholder"
            )
        if self.max_pages < 1:
            raise ConfigError(f"source {self.source_id!r}: max_pages must be positive")
        if self.timeout_ms < 1:
            raise ConfigError(f"source {self.source_id!r}: timeout_ms must be positive")
        if self.min_request_interval_ms < 0:
            raise ConfigError(
                f"source {self.source_id!r}: min_request_interval_ms must be non-negative"
            )
        if self.mode not in ("live", "fixture"):
            raise ConfigError(f"source {self.source_id!r}: unknown mode {self.mode!r}")
        if self.mode == "fixture" and self.fixtures_dir is None:
            raise ConfigError(f"source {self.source_id!r}: fixture mode needs a fixtures dir")

    def page_url(self, terms: list[str], page: int) -> str:
        joined = "+".join(urllib.parse.quote(term, safe="") for term in terms)
        query = self.query_template.replace("{terms}", joined).replace("{page}", str(page))
        return self.base_url + query


@dataclass
class FetchOutcome:
    """What one adapter run produced, including partial failures."""

    records: list[ScholarRecord] = field(default_factory=list)
    pages_fetched: int = 0
    errors: list[tuple[int, str]] = field(default_factory=list)
    from_cache: list[bool] = field(default_factory=list)


@dataclass
class SourceRegistry:
    """All configured sources, keyed by id, with their compiled rulesets."""

    configs: dict[str, AdapterConfig] = field(default_factory=dict)
    rulesets: dict[str, ExtractionRuleSet] = field(default_factory=dict)

    def require(self, source_id: str) -> AdapterConfig:
        if source_id not in self.configs:
            raise UnknownSourceError(source_id)
        return self.configs[source_id]


def load_adapter_config(directory) -> AdapterConfig:
    """Read `<directory>/adapter.conf`; the directory name is the default id."""
    directory = Path(directory)
    conf_path = directory / "adapter.conf"
    parser = configparser.ConfigParser()
    try:
        with conf_path.open(encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {conf_path}: {exc}")
    except configparser.Error as exc:
        raise ConfigError(f"malformed {conf_path}: {exc}")
    if not parser.has_section("adapter"):
        raise ConfigError(f"{conf_path}: missing [adapter] section")

    def _get(key: str, fallback: Optional[str] = None) -> Optional[str]:
        return parser.get("adapter", key, fallback=fallback)

    header: Optional[tuple[str, str]] = None
    raw_header = _get("header")
    if raw_header:
        if ":" not in raw_header:
            raise ConfigError(f"{conf_path}: header must be 'Name: value'")
        name, value = raw_header.split(":", 1)
        header = (name.strip(), value.strip())

    fixtures_dir = directory / _get("fixtures_dir", "fixtures")
    try:
        return AdapterConfig(
            source_id=_get("id", directory.name),
            display_name=_get("display_name", directory.name),
            base_url=_get("base_url", ""),
            query_template=_get("query_template", "?q={terms}&page={page}"),
            ruleset_path=directory / _get("ruleset", "rules.conf"),
            fixtures_dir=fixtures_dir,
            max_pages=parser.getint("adapter", "max_pages", fallback=3),
            timeout_ms=parser.getint("adapter", "timeout_ms", fallback=10_000),
            min_request_interval_ms=parser.getint(
                "adapter", "min_request_interval_ms", fallback=0
            ),
            mode=_get("mode", "fixture"),
            header=header,
        )
    except ValueError as exc:
        raise ConfigError(f"{conf_path}: {exc}")


def load_registry(sources_dir) -> SourceRegistry:
    """Scan a sources directory and load every adapter plus its ruleset."""
    sources_dir = Path(sources_dir)
    if not sources_dir.is_dir():
        raise ConfigError(f"sources directory {sources_dir} does not exist")
    registry = SourceRegistry()
    for entry in sorted(sources_dir.iterdir()):
        if not entry.is_dir() or not (entry / "adapter.conf").is_file():
            continue
        cfg = load_adapter_config(entry)
        if cfg.source_id in registry.configs:
            raise ConfigError(f"duplicate source id {cfg.source_id!r}")
        registry.configs[cfg.source_id] = cfg
        registry.rulesets[cfg.source_id] = load_ruleset(cfg.ruleset_path, cfg.source_id)
    return registry


def list_sources(registry: SourceRegistry) -> list[tuple[str, str, str]]:
    """(source_id, display_name, mode) triples in stable id order."""
    return [
        (sid, registry.configs[sid].display_name, registry.configs[sid].mode)
        for sid in sorted(registry.configs)
    ]


class Throttle:
    """Enforces a minimum interval between consecutive requests."""

    def __init__(
        self,
        interval_ms: int,
        clock: Callable[[], float] = time.monotonic,
        sleep: Callable[[float], None] = time.sleep,
    ) -> None:
        self.interval_s = interval_ms / 1000.0
        self.clock = clock
        self.sleep = sleep
        self._last: Optional[float] = None

    def wait(self) -> None:
        if self._last is not None and self.interval_s > 0:
            remaining = self.interval_s - (self.clock() - self._last)
            if remaining > 0:
                self.sleep(remaining)
        self._last = self.clock()


def default_transport(url: str, timeout_s: float, headers: dict) -> tuple[int, str, bytes]:
    import requests

    try:
        response = requests.get(url, timeout=timeout_s, headers=headers)
    except requests.Timeout:
        raise RequestTimeoutError(url)
    return response.status_code, response.headers.get("Content-Type", ""), response.content


def _media_kind(content_type: str, body: bytes) -> str:
    if "json" in content_type:
        return "json"
    if "html" in content_type or "xml" in content_type:
        return "html"
    head = body.lstrip()[:1]
    return "json" if head in (b"{", b"[") else "html"


def fetch_page(
    cfg: AdapterConfig,
    url: str,
    cache: Optional[CacheStore] = None,
    transport: Transport = default_transport,
    throttle: Optional[Throttle] = None,
    clock: Callable[[], float] = time.time,
) -> RawDocument:
    """Fetch one URL, consulting the cache first.

    A fresh cache entry short-circuits the network entirely; otherwise one
    GET runs under the adapter's timeout and politeness interval and the
    body lands in the cache.  `RawDocument.from_cache` records which path
    was taken.
    """
    if cache is not None:
        hit = cache.get(url)
        if hit is not None:
            body, stored_at = hit
            return RawDocument(
                source_id=cfg.source_id,
                url=url,
                media_kind=_media_kind("", body),
                body=body,
                fetched_at=stored_at,
                from_cache=True,
            )
    if throttle is not None:
        throttle.wait()
    headers = dict([cfg.header]) if cfg.header else {}
    status, content_type, body = transport(url, cfg.timeout_ms / 1000.0, headers)
    if status != 200:
        raise HttpStatusError(status, url)
    if cache is not None:
        cache.put(url, body)
    return RawDocument(
        source_id=cfg.source_id,
        url=url,
        media_kind=_media_kind(content_type, body),
        body=body,
        fetched_at=clock(),
        from_cache=False,
    )


def _fixture_page(cfg: AdapterConfig, slug: str, page: int) -> Optional[RawDocument]:
    page_dir = cfg.fixtures_dir / slug
    for suffix, kind in ((".html", "html"), (".json", "json")):
        path = page_dir / f"page{page}{suffix}"
        if path.is_file():
            return RawDocument(
                source_id=cfg.source_id,
                url=path.as_posix(),
                media_kind=kind,
                body=path.read_bytes(),
                fetched_at=0.0,
            )
    return None


def _has_next_link(doc: RawDocument, rules: ExtractionRuleSet) -> bool:
    if rules.pagination_rule is None or doc.media_kind != "html":
        return True
    root = parse_html(doc.body.decode("utf-8", errors="replace"))
    return bool(select(root, rules.pagination_rule.compiled))


def run_adapter(
    cfg: AdapterConfig,
    terms: list[str],
    ruleset: Optional[ExtractionRuleSet] = None,
    cache: Optional[CacheStore] = None,
    transport: Transport = default_transport,
    clock: Callable[[], float] = time.monotonic,
    sleep: Callable[[float], None] = time.sleep,
) -> FetchOutcome:
    """Fetch, extract, and canonicalize every result page for `terms`.

    Pages are visited sequentially from 1 up to `max_pages`, stopping
    early at the first page with no entries (or, in live HTML mode, no
    next-page link).  Any per-page failure is recorded in
    `FetchOutcome.errors` and never aborts the remaining pages.
    """
    if not terms:
        raise ValueError("run_adapter needs at least one term")
    if ruleset is None:
        ruleset = load_ruleset(cfg.ruleset_path, cfg.source_id)

    outcome = FetchOutcome()
    slug = slugify(terms)
    throttle = Throttle(cfg.min_request_interval_ms, clock=clock, sleep=sleep)

    for page in range(1, cfg.max_pages + 1):
        if cfg.mode == "fixture":
            doc = _fixture_page(cfg, slug, page)
            if doc is None:
                break
        else:
            url = cfg.page_url(terms, page)
            try:
                doc = fetch_page(cfg, url, cache=cache, transport=transport, throttle=throttle)
            except (ScholarlensError, OSError) as exc:
                outcome.errors.append((page, str(exc)))
                outcome.pages_fetched += 1
                outcome.from_cache.append(False)
                continue

        outcome.pages_fetched += 1
        outcome.from_cache.append(doc.from_cache)
        try:
            idoc = extract_entries(doc, ruleset)
            records = transform_to_canonical(idoc, authors_split=ruleset.authors_split)
        except ScholarlensError as exc:
            outcome.errors.append((page, str(exc)))
            continue
        if not records:
            break
        outcome.records.extend(records)
        if cfg.mode == "live" and not _has_next_link(doc, ruleset):
            break

    logger.debug(
        "adapter %s slug=%s: %d records over %d pages, %d errors",
        cfg.source_id, slug, len(outcome.records), outcome.pages_fetched, len(outcome.errors),
    )
    return outcome
