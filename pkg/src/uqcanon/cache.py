"""Content-addressed on-disk cache for weight spaces and canonical bases.

An entry is two lines: a JSON header ``{"format", "key", "sha256"}`` and the
JSON payload.  A header that does not parse, a digest mismatch or a foreign
format version all count as a corrupt entry: the caller recomputes and the
entry is overwritten.  Writes go to a temporary file first and are moved
into place, so readers never see half an entry.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path

from . import __version__

log = logging.getLogger(__name__)

CACHE_FORMAT = 1
ENV_VAR = "UQCANON_CACHE_DIR"


class CorruptEntry(ValueError):
    pass


def entry_key(datum, kind, weight, extra=None):
    ident = {
        "format": CACHE_FORMAT,
        "version": __version__,
        "datum": json.loads(datum.canonical_key()),
        "kind": kind,
        "weight": list(weight),
        "extra": extra,
    }
    blob = json.dumps(ident, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def default_cache_dir():
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else None


class Cache:
    def __init__(self, root):
        self.root = Path(root)
        self.hits = 0
        self.misses = 0
        self.corrupt = 0

    def path(self, key):
        return self.root / key[:2] / f"{key}.json"

    def read(self, key):
        """The payload for ``key``; raises :class:`CorruptEntry` on damage, ``None`` if absent."""
        p = self.path(key)
        if not p.exists():
            return None
        text = p.read_text()
        head, sep, body = text.partition("\n")
        if not sep:
            raise CorruptEntry(f"{p}: truncated entry")
        try:
            header = json.loads(head)
        except json.JSONDecodeError as exc:
            raise CorruptEntry(f"{p}: unreadable header") from exc
        if header.get("format") != CACHE_FORMAT or header.get("key") != key:
            raise CorruptEntry(f"{p}: format or key mismatch")
        if hashlib.sha256(body.encode()).hexdigest() != header.get("sha256"):
            raise CorruptEntry(f"{p}: digest mismatch")
        return json.loads(body)

    def get(self, key):
        try:
            doc = self.read(key)
        except CorruptEntry as exc:
            log.warning("discarding cache entry: %s", exc)
            self.corrupt += 1
            return None
        if doc is None:
            self.misses += 1
        else:
            self.hits += 1
        return doc

    def put(self, key, doc):
        body = json.dumps(doc, separators=(",", ":"), sort_keys=True)
        header = json.dumps({"format": CACHE_FORMAT, "key": key, "sha256": hashlib.sha256(body.encode()).hexdigest()})
        p = self.path(key)
        p.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=p.parent, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(header + "\n" + body)
            os.replace(tmp, p)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
