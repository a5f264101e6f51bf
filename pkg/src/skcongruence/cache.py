"""Content-addressed on-disk JSON cache.

Keys are sha256 hashes of (format-version, operation, parameters); values are
JSON records carrying their own payload hash.  A record whose payload does not
match its stored hash is treated as absent and recomputed -- a poisoned cache
can slow us down but never lie to us.  Writes go through a temp file and
os.replace so concurrent runs see either the old or the new record, never a
torn one.

The cache directory comes from the SKC_CACHE environment variable; unset means
caching is off.  The CLI --cache flag simply sets the variable for the process.
"""

import hashlib
import json
import os
import tempfile

CACHE_ENV = "SKC_CACHE"
_VERSION = "skc-cache-1"


def cache_dir():
    return os.environ.get(CACHE_ENV) or None


def _canon(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _key(op, params):
    return hashlib.sha256(_canon([_VERSION, op, params]).encode()).hexdigest()


def fetch(op, params):
    """Cached payload for (op, params), or None."""
    d = cache_dir()
    if not d:
        return None
    path = os.path.join(d, _key(op, params) + ".json")
    try:
        with open(path) as fh:
            rec = json.load(fh)
    except (OSError, ValueError):
        return None
    payload = rec.get("payload")
    if hashlib.sha256(_canon(payload).encode()).hexdigest() != rec.get("payload_sha256"):
        return None
    return payload


def store(op, params, payload):
    d = cache_dir()
    if not d:
        return
    os.makedirs(d, exist_ok=True)
    rec = {
        "op": op,
        "params": params,
        "payload": payload,
        "payload_sha256": hashlib.sha256(_canon(payload).encode()).hexdigest(),
    }
    path = os.path.join(d, _key(op, params) + ".json")
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(rec, fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cached(op, params, compute):
    """fetch, else compute() and store; returns the JSON-compatible payload."""
    got = fetch(op, params)
    if got is not None:
        return got
    val = compute()
    store(op, params, val)
    return val
