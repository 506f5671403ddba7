"""Layered runtime configuration: file, then environment, then flags.

`service.conf` (a plain key/value file with a `[service]` section) sets
the base values; any `SCHOLARLENS_*` environment variable overrides the
file; explicit overrides (CLI flags) win over both.  Relative paths in
the file resolve against the file's own directory, so a checkout works
no matter where the process starts.
"""

from __future__ import annotations

import configparser
import logging
import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Mapping, Optional

from .cache import DEFAULT_TTL_SECONDS, CacheStore
from .errors import ConfigError
from .ontology import Ontology, load_ontology, merge_ontologies
from .sources import SourceRegistry, load_registry

logger = logging.getLogger(__name__)

ENV_PREFIX = "SCHOLARLENS_"
DEFAULT_CONFIG_NAME = "service.conf"


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8080
    ontology_paths: tuple[Path, ...] = (Path("fixtures/ontologies/cs.onto"),)
    sources_dir: Path = Path("sources")
    cache_dir: Optional[Path] = None
    cache_ttl_seconds: float = DEFAULT_TTL_SECONDS
    cors_origins: tuple[str, ...] = ("*",)
    static_dir: Optional[Path] = None

    def validate(self) -> None:
        if not (1 <= self.port <= 65535):
            raise ConfigError(f"port {self.port} out of range")
        if self.cache_ttl_seconds < 0:
            raise ConfigError("cache_ttl_seconds must be non-negative")
        if not self.ontology_paths:
            raise ConfigError("no ontology files configured")


_PATH_KEYS = {"sources_dir", "cache_dir", "static_dir"}
_KEYS = {
    "host": str,
    "port": int,
    "ontology": str,
    "sources_dir": str,
    "cache_dir": str,
    "cache_ttl_seconds": float,
    "cors_origins": str,
    "static_dir": str,
}


def _apply(values: dict, key: str, raw: str, base: Optional[Path]) -> None:
    caster = _KEYS[key]
    try:
        value = caster(raw)
    except ValueError:
        raise ConfigError(f"config value {key}={raw!r} is not a {caster.__name__}")

    def _resolve(p: str) -> Path:
        path = Path(p)
        return (base / path) if (base is not None and not path.is_absolute()) else path

    if key == "ontology":
        values["ontology_paths"] = tuple(
            _resolve(part.strip()) for part in raw.split(",") if part.strip()
        )
    elif key == "cors_origins":
        values["cors_origins"] = tuple(part.strip() for part in raw.split(",") if part.strip())
    elif key in _PATH_KEYS:
        values[key] = _resolve(raw)
    else:
        values[key] = value


def load_config(
    path=None,
    env: Optional[Mapping[str, str]] = None,
    overrides: Optional[Mapping[str, str]] = None,
) -> ServiceConfig:
    """Build a ServiceConfig from file < environment < explicit overrides."""
    env = os.environ if env is None else env
    values: dict = {}

    if path is not None:
        path = Path(path)
        parser = configparser.ConfigParser()
        try:
            with path.open(encoding="utf-8") as fh:
                parser.read_file(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}")
        except configparser.Error as exc:
            raise ConfigError(f"malformed config {path}: {exc}")
        section = "service" if parser.has_section("service") else configparser.DEFAULTSECT
        for key in parser[section]:
            if key not in _KEYS:
                raise ConfigError(f"{path}: unknown config key {key!r}")
            _apply(values, key, parser[section][key], base=path.parent)

    for key in _KEYS:
        env_name = ENV_PREFIX + key.upper()
        if env_name in env:
            _apply(values, key, env[env_name], base=None)

    if overrides:
        for key, raw in overrides.items():
            if raw is None:
                continue
            if key not in _KEYS:
                raise ConfigError(f"unknown config override {key!r}")
            _apply(values, key, str(raw), base=None)

    config = replace(ServiceConfig(), **values)
    config.validate()
    return config


@dataclass
class Engine:
    """The loaded, immutable core a server or CLI command works against."""

    config: ServiceConfig
    ontology: Ontology
    registry: SourceRegistry
    cache: Optional[CacheStore] = None


def load_engine(config: ServiceConfig) -> Engine:
    """Load ontology files (merged), the source registry, and the cache."""
    ontologies = []
    for path in config.ontology_paths:
        ontologies.append(load_ontology(path))
    if len(ontologies) == 1:
        ontology = ontologies[0]
    else:
        ontology = merge_ontologies("merged", ontologies)
    registry = load_registry(config.sources_dir)
    cache = (
        CacheStore(config.cache_dir, ttl_seconds=config.cache_ttl_seconds)
        if config.cache_dir is not None
        else None
    )
    logger.info(
        "engine ready: %d ontology classes, %d sources", len(ontology), len(registry.configs)
    )
    return Engine(config=config, ontology=ontology, registry=registry, cache=cache)
