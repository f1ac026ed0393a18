"""
Binary cache of group tables.

Layout (all integers little-endian)::

    magic        8 bytes   b"F4LGTBL\\0"
    version      u16
    matrix hash  32 bytes  sha256 of the Coxeter matrix text
    rank         u16
    size         u32
    matrix       rank*rank u8      (0 encodes m = infinity)
    lengths      size u16
    right        size*rank u32     right[w, s] = w*s
    left         size*rank u32
    words        size records: u8 length, then that many u8 letters (0-based)
    covers       size records: u16 count, then count u32 deltas of the
                 ascending lower-cover ids (first delta taken from 0)

A file with another version or matrix hash is a mismatch and gets rebuilt;
anything else that fails to parse is reported as corrupt.
"""

from __future__ import annotations

import os
import struct
from pathlib import Path

import numpy as np

from .coxeter import (
    DEFAULT_SIZE_LIMIT,
    GroupTable,
    build_group,
    coxeter_matrix,
    matrix_hash,
    validate_coxeter_matrix,
)

MAGIC = b"F4LGTBL\0"
FORMAT_VERSION = 1
ENV_CACHE_DIR = "F4LEHMER_CACHE"


class CacheError(RuntimeError):
    pass


class CacheMismatch(CacheError):
    """Valid file, but for another format version or Coxeter matrix."""


class CacheCorrupt(CacheError):
    pass


def encode_table(table: GroupTable) -> bytes:
    k, n = table.rank, table.size
    out = bytearray()
    out += MAGIC
    out += struct.pack("<H", FORMAT_VERSION)
    out += matrix_hash(table.coxeter_matrix)
    out += struct.pack("<HI", k, n)
    out += bytes(x for row in table.coxeter_matrix for x in row)
    out += table.length.astype("<u2").tobytes()
    out += table.right.astype("<u4").tobytes()
    out += table.left.astype("<u4").tobytes()
    for w in table.words:
        out += bytes([len(w), *w])
    for cs in table.lower_covers:
        prev = 0
        deltas = []
        for c in cs:
            deltas.append(c - prev)
            prev = c
        out += struct.pack(f"<H{len(deltas)}I", len(deltas), *deltas)
    return bytes(out)


def decode_table(data: bytes, expected_matrix=None) -> GroupTable:
    try:
        return _decode(data, expected_matrix)
    except CacheError:
        raise
    except (struct.error, ValueError, IndexError) as exc:
        raise CacheCorrupt(f"unreadable group table: {exc}") from exc


def _decode(data: bytes, expected_matrix) -> GroupTable:
    if data[:8] != MAGIC:
        raise CacheCorrupt("bad magic bytes")
    (version,) = struct.unpack_from("<H", data, 8)
    if version != FORMAT_VERSION:
        raise CacheMismatch(f"format version {version}, expected {FORMAT_VERSION}")
    digest = data[10:42]
    if expected_matrix is not None and digest != matrix_hash(expected_matrix):
        raise CacheMismatch("cached table is for a different Coxeter matrix")
    k, n = struct.unpack_from("<HI", data, 42)
    pos = 48
    mat = tuple(tuple(data[pos + i * k: pos + (i + 1) * k]) for i in range(k))
    pos += k * k
    if matrix_hash(mat) != digest:
        raise CacheCorrupt("stored matrix does not match its hash")

    def take(dtype, count):
        nonlocal pos
        size = np.dtype(dtype).itemsize * count
        if pos + size > len(data):
            raise CacheCorrupt("truncated file")
        arr = np.frombuffer(data, dtype=dtype, count=count, offset=pos).astype(np.int64)
        pos += size
        return arr

    length = take("<u2", n)
    right = take("<u4", n * k).reshape(n, k)
    left = take("<u4", n * k).reshape(n, k)
    words = []
    for _ in range(n):
        m = data[pos]
        words.append(tuple(data[pos + 1: pos + 1 + m]))
        pos += 1 + m
    covers = []
    for _ in range(n):
        (c,) = struct.unpack_from("<H", data, pos)
        deltas = struct.unpack_from(f"<{c}I", data, pos + 2)
        pos += 2 + 4 * c
        covers.append(tuple(np.cumsum(deltas).tolist()) if c else ())
    if pos != len(data):
        raise CacheCorrupt("trailing bytes after cover lists")
    if (right >= n).any() or (left >= n).any():
        raise CacheCorrupt("element id out of range")
    return GroupTable(mat, length, right, left, words, covers)


def save_table(table: GroupTable, path: str | os.PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_bytes(encode_table(table))
    tmp.replace(path)
    return path


def load_table(path: str | os.PathLike, expected_matrix=None) -> GroupTable:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise CacheError(f"cannot read {path}: {exc}") from exc
    return decode_table(data, expected_matrix)


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_CACHE_DIR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "f4lehmer"


def cache_path(system, cache_dir: str | os.PathLike | None = None) -> Path:
    mat = coxeter_matrix(system) if isinstance(system, str) else validate_coxeter_matrix(system)
    d = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    return d / f"group-{matrix_hash(mat).hex()[:16]}.tbl"


def get_table(system, cache_dir: str | os.PathLike | None = None, use_cache: bool = True,
              size_limit: int = DEFAULT_SIZE_LIMIT) -> GroupTable:
    """Load the table from the cache, or build (and store) it.

    Version/matrix mismatches are rebuilt silently; :class:`CacheCorrupt`
    propagates.
    """
    mat = coxeter_matrix(system) if isinstance(system, str) else validate_coxeter_matrix(system)
    if not use_cache:
        return build_group(mat, size_limit)
    path = cache_path(mat, cache_dir)
    if path.exists():
        try:
            return load_table(path, mat)
        except CacheMismatch:
            pass
    table = build_group(mat, size_limit)
    try:
        save_table(table, path)
    except OSError:
        pass  # read-only cache location: keep the in-memory table
    return table
