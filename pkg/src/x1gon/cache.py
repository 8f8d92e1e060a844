"""Small on-disk JSON cache with atomic writes.

The cache directory is taken from the ``X1GON_CACHE`` environment variable,
falling back to ``~/.cache/x1gon``.  Setting ``X1GON_CACHE`` to the empty
string disables the disk cache.  Keys embed a model version and a format
version so stale entries are never reused after a change of conventions.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

MODEL_VERSION = "xy1"
FORMAT_VERSION = "1"

_override = None


def set_cache_dir(path):
    """Force a cache directory for this process (``None`` restores the default)."""
    global _override
    _override = None if path is None else str(path)


def cache_dir():
    if _override is not None:
        d = _override
    else:
        d = os.environ.get("X1GON_CACHE")
        if d is None:
            d = str(Path.home() / ".cache" / "x1gon")
    if d == "":
        return None
    p = Path(d)
    try:
        p.mkdir(parents=True, exist_ok=True)
    except OSError:
        return None
    return p


def _path(kind, key):
    d = cache_dir()
    if d is None:
        return None
    return d / f"{kind}-{key}-m{MODEL_VERSION}-f{FORMAT_VERSION}.json"


def load(kind, key):
    p = _path(kind, key)
    if p is None or not p.exists():
        return None
    try:
        with open(p, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, ValueError):
        return None


def store(kind, key, obj):
    p = _path(kind, key)
    if p is None:
        return None
    atomic_write_text(p, json.dumps(obj, sort_keys=True, separators=(",", ":")))
    return p


def atomic_write_text(path, text):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=".tmp-", suffix=path.suffix)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
