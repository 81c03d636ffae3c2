"""Canonical on-disk format for sampled colorings.

A record captures one sampler output together with everything needed to
reproduce it: the graph descriptor, the color budget, the seed, and the
algorithm configuration. Serialization is canonical JSON (sorted keys,
no whitespace, trailing newline), so serializing a deserialized record
reproduces the bytes exactly; tooling can diff and deduplicate records
byte-wise.

Format errors carry a ``position``: the byte offset for syntax errors,
the offending element index for bad color entries, and 0 for other
semantic violations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import FormatError

__all__ = ["SCHEMA_VERSION", "ColoringRecord", "serialize", "deserialize"]

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ColoringRecord:
    n: int
    k: int
    colors: tuple[int, ...]
    graph: dict
    seed: int
    algorithm: dict
    stats: dict | None = None
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        _validate_fields(
            {
                "schema_version": self.schema_version,
                "n": self.n,
                "k": self.k,
                "colors": list(self.colors),
                "graph": self.graph,
                "seed": self.seed,
                "algorithm": self.algorithm,
                "stats": self.stats,
            }
        )


def _fail(message: str, position: int = 0):
    raise FormatError(message, position=position)


def _require_int(payload: dict, key: str) -> int:
    value = payload.get(key)
    if isinstance(value, bool) or not isinstance(value, int):
        _fail(f"field '{key}' must be an integer, got {type(value).__name__}")
    return value


def _validate_fields(payload: dict) -> dict:
    version = _require_int(payload, "schema_version")
    if version != SCHEMA_VERSION:
        _fail(f"unsupported schema_version {version}, expected {SCHEMA_VERSION}")
    n = _require_int(payload, "n")
    if n < 0:
        _fail(f"n must be non-negative, got {n}")
    k = _require_int(payload, "k")
    if k < 1:
        _fail(f"k must be at least 1, got {k}")
    colors = payload.get("colors")
    if not isinstance(colors, (list, tuple)):
        _fail("field 'colors' must be an array")
    if len(colors) != n:
        _fail(f"colors has {len(colors)} entries but n={n}")
    for i, c in enumerate(colors):
        if isinstance(c, bool) or not isinstance(c, int):
            _fail(f"color at index {i} is not an integer", position=i)
        if not 1 <= c <= k:
            _fail(f"color {c} at index {i} outside 1..{k}", position=i)
    for key in ("graph", "algorithm"):
        if not isinstance(payload.get(key), dict):
            _fail(f"field '{key}' must be an object")
    seed = _require_int(payload, "seed")
    if seed < 0:
        _fail(f"seed must be non-negative, got {seed}")
    stats = payload.get("stats")
    if stats is not None and not isinstance(stats, dict):
        _fail("field 'stats' must be an object or null")
    return payload


def serialize(record: ColoringRecord) -> bytes:
    """Canonical JSON encoding: sorted keys, compact separators, one
    trailing newline. Deterministic for equal records."""
    payload = {
        "schema_version": record.schema_version,
        "n": record.n,
        "k": record.k,
        "colors": list(record.colors),
        "graph": record.graph,
        "seed": record.seed,
        "algorithm": record.algorithm,
        "stats": record.stats,
    }
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"), allow_nan=False)
    return text.encode("utf-8") + b"\n"


def deserialize(data) -> ColoringRecord:
    """Parse and validate one record from bytes or str.

    Raises FormatError with a byte position for malformed JSON and an
    element or zero position for semantic violations.
    """
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise FormatError(f"record is not valid UTF-8: {exc}", position=exc.start)
    elif isinstance(data, str):
        text = data
    else:
        _fail(f"record must be bytes or str, got {type(data).__name__}")
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"malformed JSON: {exc.msg}", position=exc.pos)
    if not isinstance(payload, dict):
        _fail("record must be a JSON object")
    known = {"schema_version", "n", "k", "colors", "graph", "seed", "algorithm", "stats"}
    unknown = sorted(set(payload) - known)
    if unknown:
        _fail(f"unknown fields: {', '.join(unknown)}")
    _validate_fields(payload)
    return ColoringRecord(
        n=payload["n"],
        k=payload["k"],
        colors=tuple(payload["colors"]),
        graph=payload["graph"],
        seed=payload["seed"],
        algorithm=payload["algorithm"],
        stats=payload.get("stats"),
        schema_version=payload["schema_version"],
    )
