"""Binary group-table cache.

Layout (little-endian): magic b"G2FK", format version (1 byte), p (2 bytes),
model tag (1 byte), element count (4 bytes), then per element its six
normal-form coordinates, one byte each, in id order.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .groups import GroupTable
from .tables import MODELS

MAGIC = b"G2FK"
VERSION = 1
HEADER = struct.Struct("<4sBHBI")
TAGS = {cls.tag_byte: name for name, cls in MODELS.items()}


class CacheError(ValueError):
    pass


def cache_path(cache_dir: Path, p: int, tag: str) -> Path:
    return Path(cache_dir) / f"{tag}-p{p}.g2fk"


def encode_table(table: GroupTable) -> bytes:
    header = HEADER.pack(MAGIC, VERSION, table.p, table.model.tag_byte, table.n)
    return header + table.coords.astype(np.uint8).tobytes()


def save_table(table: GroupTable, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_bytes(encode_table(table))
    tmp.replace(path)
    return path


def decode_table(data: bytes, *, seed: int = 0, spot_checks: int = 1000) -> GroupTable:
    if len(data) < HEADER.size:
        raise CacheError("truncated header")
    magic, version, p, tag_byte, count = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise CacheError(f"bad magic {magic!r}")
    if version != VERSION:
        raise CacheError(f"unsupported cache version {version}")
    if tag_byte not in TAGS:
        raise CacheError(f"unknown model tag {tag_byte}")
    body = data[HEADER.size:]
    if len(body) != 6 * count:
        raise CacheError(f"truncated body: expected {6 * count} bytes, found {len(body)}")
    coords = np.frombuffer(body, dtype=np.uint8).reshape(count, 6).astype(np.int64)
    model = MODELS[TAGS[tag_byte]](p)
    try:
        table = GroupTable(model, coords)
    except (ValueError, KeyError) as exc:
        raise CacheError(f"invalid carrier: {exc}") from exc
    _spot_check(table, seed, spot_checks)
    return table


def _spot_check(table: GroupTable, seed: int, count: int) -> None:
    """Products must stay in the carrier and associate on random triples."""
    rng = np.random.default_rng(seed)
    a, b, c = rng.integers(0, table.n, size=(3, count))
    try:
        left = table.mul(table.mul(a, b), c)
        right = table.mul(a, table.mul(b, c))
    except KeyError as exc:
        raise CacheError("carrier not closed under multiplication") from exc
    if not np.array_equal(left, right):
        raise CacheError("associativity spot check failed")


def load_table(path: Path, *, seed: int = 0) -> GroupTable:
    return decode_table(Path(path).read_bytes(), seed=seed)
