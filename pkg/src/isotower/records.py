"""Versioned JSON records with content hashes, and atomic file output."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path

FORMAT_VERSION = 1


class IntegrityError(ValueError):
    """A record's stored content hash does not match its contents."""


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def content_hash(obj: dict) -> str:
    body = {k: v for k, v in obj.items() if k != "content_hash"}
    return hashlib.sha256(canonical(body).encode()).hexdigest()


def seal(obj: dict) -> dict:
    obj = dict(obj)
    obj["format_version"] = FORMAT_VERSION
    obj["content_hash"] = content_hash(obj)
    return obj


def check_seal(obj: dict, kind: str | None = None) -> dict:
    if obj.get("format_version") != FORMAT_VERSION:
        raise IntegrityError(f"unsupported format_version {obj.get('format_version')!r}")
    if kind is not None and obj.get("kind") != kind:
        raise IntegrityError(f"expected a {kind} record, got {obj.get('kind')!r}")
    if obj.get("content_hash") != content_hash(obj):
        raise IntegrityError("content hash mismatch")
    return obj


def dumps(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, indent=1, ensure_ascii=True) + "\n"


def write_atomic(path: str | os.PathLike, text: str) -> None:
    """Write to a temporary file in the same directory, then rename over path."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load(path: str | os.PathLike, kind: str | None = None) -> dict:
    with open(path, encoding="ascii") as fh:
        obj = json.load(fh)
    return check_seal(obj, kind)


def q(x) -> str:
    """Exact rational as a string."""
    return str(Fraction(x))


def unq(s: str) -> Fraction:
    return Fraction(s)
