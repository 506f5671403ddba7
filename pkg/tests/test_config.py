"""Layered configuration: defaults, file, environment, explicit overrides."""

from pathlib import Path

import pytest

import scholarlens as sl
from scholarlens.config import ServiceConfig
from scholarlens.errors import ConfigError

from .conftest import REPO


def test_defaults():
    cfg = sl.load_config(env={})
    assert cfg.host == "127.0.0.1"
    assert cfg.port == 8080
    assert cfg.ontology_paths == (Path("fixtures/ontologies/cs.onto"),)
    assert cfg.sources_dir == Path("sources")
    assert cfg.cache_dir is None
    assert cfg.cors_origins == ("*",)


def test_file_paths_resolve_against_file(tmp_path):
    conf = tmp_path / "etc" / "service.conf"
    conf.parent.mkdir()
    conf.write_text(
        "[service]\nport = 9000\nontology = a.onto, deep/b.onto\nsources_dir = portals\n"
    )
    cfg = sl.load_config(conf, env={})
    assert cfg.port == 9000
    assert cfg.ontology_paths == (tmp_path / "etc" / "a.onto", tmp_path / "etc" / "deep/b.onto")
    assert cfg.sources_dir == tmp_path / "etc" / "portals"


def test_absolute_file_paths_untouched(tmp_path):
    conf = tmp_path / "service.conf"
    conf.write_text("[service]\nsources_dir = /opt/portals\n")
    assert sl.load_config(conf, env={}).sources_dir == Path("/opt/portals")


def test_environment_overrides_file(tmp_path):
    conf = tmp_path / "service.conf"
    conf.write_text("[service]\nport = 9000\nhost = filehost\n")
    cfg = sl.load_config(conf, env={"SCHOLARLENS_PORT": "9100"})
    assert cfg.port == 9100
    assert cfg.host == "filehost"


def test_overrides_beat_environment(tmp_path):
    cfg = sl.load_config(
        env={"SCHOLARLENS_PORT": "9100", "SCHOLARLENS_HOST": "envhost"},
        overrides={"port": "9200", "host": None},
    )
    assert cfg.port == 9200
    assert cfg.host == "envhost"  # None overrides are skipped


def test_cors_origins_split_and_trimmed():
    cfg = sl.load_config(env={"SCHOLARLENS_CORS_ORIGINS": " http://a.test , http://b.test "})
    assert cfg.cors_origins == ("http://a.test", "http://b.test")


def test_unknown_file_key_rejected(tmp_path):
    conf = tmp_path / "service.conf"
    conf.write_text("[service]\nspeed = 11\n")
    with pytest.raises(ConfigError):
        sl.load_config(conf, env={})


def test_nonnumeric_port_rejected():
    with pytest.raises(ConfigError):
        sl.load_config(env={"SCHOLARLENS_PORT": "eighty"})


@pytest.mark.parametrize("port", ["0", "65536", "-1"])
def test_out_of_range_port_rejected(port):
    with pytest.raises(ConfigError):
        sl.load_config(env={"SCHOLARLENS_PORT": port})


def test_missing_config_file_rejected(tmp_path):
    with pytest.raises(ConfigError):
        sl.load_config(tmp_path / "absent.conf", env={})


def test_empty_ontology_list_rejected():
    with pytest.raises(ConfigError):
        sl.load_config(env={"SCHOLARLENS_ONTOLOGY": " , "})


def test_shipped_service_conf_loads():
    cfg = sl.load_config(REPO / "service.conf", env={})
    assert cfg.port == 8080
    assert cfg.ontology_paths == (REPO / "fixtures/ontologies/cs.onto",)
    assert cfg.sources_dir == REPO / "sources"
    assert cfg.cache_ttl_seconds == 86400.0


def test_engine_loads_from_shipped_config():
    engine = sl.load_engine(sl.load_config(REPO / "service.conf", env={}))
    assert len(engine.ontology) == 67
    assert sorted(engine.registry.configs) == ["academic_graph", "fixture_corpus", "ieee_xplore"]
    assert engine.cache is None


def test_engine_merges_multiple_ontologies(tmp_path):
    cfg = ServiceConfig(
        ontology_paths=(
            REPO / "fixtures/ontologies/database.onto",
            REPO / "fixtures/ontologies/networking.onto",
        ),
        sources_dir=REPO / "sources",
    )
    engine = sl.load_engine(cfg)
    single = sl.load_ontology(REPO / "fixtures/ontologies/database.onto")
    assert len(engine.ontology) == len(single) + len(
        sl.load_ontology(REPO / "fixtures/ontologies/networking.onto")
    )


def test_engine_builds_cache_when_configured(tmp_path):
    cfg = ServiceConfig(
        ontology_paths=(REPO / "fixtures/ontologies/cs.onto",),
        sources_dir=REPO / "sources",
        cache_dir=tmp_path / "pages",
        cache_ttl_seconds=5.0,
    )
    engine = sl.load_engine(cfg)
    assert engine.cache is not None
    assert engine.cache.ttl_seconds == 5.0
