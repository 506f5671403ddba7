"""Filesystem response cache: freshness, atomicity, key isolation."""

import pytest

from scholarlens.cache import CacheStore
from scholarlens.errors import CacheError


class Clock:
    def __init__(self, now=1000.0):
        self.now = now

    def __call__(self):
        return self.now


@pytest.fixture
def clock():
    return Clock()


@pytest.fixture
def store(tmp_path, clock):
    return CacheStore(tmp_path / "cache", ttl_seconds=60.0, clock=clock)


def test_miss_returns_none(store):
    assert store.get("http://example.test/a") is None


def test_put_then_get_round_trips(store, clock):
    store.put("http://example.test/a", b"payload \xff bytes")
    body, stored_at = store.get("http://example.test/a")
    assert body == b"payload \xff bytes"
    assert stored_at == clock.now


def test_expiry_is_strict(store, clock):
    store.put("u", b"x")
    clock.now += 59.999
    assert store.get("u") is not None
    clock.now = 1000.0 + 60.0  # exactly ttl later: stale
    assert store.get("u") is None


def test_zero_ttl_never_fresh(tmp_path, clock):
    store = CacheStore(tmp_path / "c", ttl_seconds=0.0, clock=clock)
    store.put("u", b"x")
    assert store.get("u") is None


def test_distinct_urls_do_not_collide(store):
    store.put("http://a.test/", b"A")
    store.put("http://b.test/", b"B")
    assert store.get("http://a.test/")[0] == b"A"
    assert store.get("http://b.test/")[0] == b"B"


def test_overwrite_replaces_body_and_timestamp(store, clock):
    store.put("u", b"old")
    clock.now += 10
    store.put("u", b"new")
    body, stored_at = store.get("u")
    assert body == b"new"
    assert stored_at == 1010.0


def test_directory_created_on_demand(tmp_path, clock):
    target = tmp_path / "deep" / "nested" / "cache"
    store = CacheStore(target, ttl_seconds=60.0, clock=clock)
    store.put("u", b"x")
    assert target.is_dir()


def test_shard_layout(store, tmp_path):
    import hashlib

    store.put("http://example.test/a", b"x")
    key = hashlib.sha256(b"http://example.test/a").hexdigest()
    assert (tmp_path / "cache" / key[:2] / key).is_file()


def test_corrupt_entry_treated_as_miss(store, tmp_path):
    import hashlib

    store.put("u", b"x")
    key = hashlib.sha256(b"u").hexdigest()
    (tmp_path / "cache" / key[:2] / key).write_bytes(b"not-a-float\n")
    assert store.get("u") is None


def test_unwritable_directory_raises_cache_error(tmp_path, clock):
    blocker = tmp_path / "blocked"
    blocker.write_text("plain file where a directory must go")
    with pytest.raises(CacheError):
        CacheStore(blocker, ttl_seconds=60.0, clock=clock)


def test_binary_bodies_with_newlines_survive(store):
    body = b"line one\nline two\r\n\x00\x01\x02"
    store.put("u", body)
    assert store.get("u")[0] == body
