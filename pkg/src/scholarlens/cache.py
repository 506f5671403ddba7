"""Content-addressed on-disk cache for fetched pages.

Entries are keyed by the sha256 of the URL, stored one file per entry
with the store timestamp on the first line.  Writes go through a
temporary file and an atomic rename, so concurrent writers of the same
key resolve to one complete value and readers never see a torn entry.
"""

from __future__ import annotations

import hashlib
import logging
import os
import tempfile
import time
from pathlib import Path
from typing import Callable, Optional

from .errors import CacheError

logger = logging.getLogger(__name__)

DEFAULT_TTL_SECONDS = 24 * 60 * 60.0


class CacheStore:
    """A minimal TTL cache of URL → response body on local disk."""

    def __init__(
        self,
        directory,
        ttl_seconds: float = DEFAULT_TTL_SECONDS,
        clock: Callable[[], float] = time.time,
    ) -> None:
        self.directory = Path(directory)
        self.ttl_seconds = float(ttl_seconds)
        self.clock = clock
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise CacheError(f"cannot create cache directory {self.directory}: {exc}")

    def key_for(self, url: str) -> str:
        return hashlib.sha256(url.encode("utf-8")).hexdigest()

    def _path_for(self, url: str) -> Path:
        key = self.key_for(url)
        return self.directory / key[:2] / key

    def get(self, url: str) -> Optional[tuple[bytes, float]]:
        """Return (body, stored_at) when a fresh entry exists, else None.

        A TTL of 0 never returns a hit, forcing a refetch every time.
        """
        path = self._path_for(url)
        try:
            raw = path.read_bytes()
        except FileNotFoundError:
            return None
        except OSError as exc:
            raise CacheError(f"cannot read cache entry {path}: {exc}")
        header, _, body = raw.partition(b"\n")
        try:
            stored_at = float(header)
        except ValueError:
            logger.warning("discarding corrupt cache entry %s", path)
            return None
        if self.ttl_seconds <= 0 or (self.clock() - stored_at) >= self.ttl_seconds:
            return None
        return body, stored_at

    def put(self, url: str, body: bytes) -> float:
        """Store `body` for `url`; returns the recorded timestamp."""
        path = self._path_for(url)
        stored_at = self.clock()
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
            try:
                with os.fdopen(fd, "wb") as fh:
                    fh.write(repr(stored_at).encode("ascii") + b"\n")
                    fh.write(body)
                os.replace(tmp_name, path)
            except BaseException:
                try:
                    os.unlink(tmp_name)
                except OSError:
                    pass
                raise
        except OSError as exc:
            raise CacheError(f"cannot write cache entry {path}: {exc}")
        return stored_at
