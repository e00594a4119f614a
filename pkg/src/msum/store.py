"""On-disk result store: a flat append-only table of computed m values.

Layout (all integers little-endian):
  header: magic "MSUMSTR1" (8) | version u32 | row_size u32 | e_min u64 | e_max u64
  row:    e u64 | subgroup fingerprint (16) | m u64 | witness hash u64 | crc32 u32 | pad u32

Row CRCs detect torn writes; the e-range in the header is refreshed on save.
No database dependency, reproducible and diff-able.
"""
from __future__ import annotations

import os
import struct
import zlib

from .errors import StoreError

MAGIC = b"MSUMSTR1"
VERSION = 1
_HEADER = struct.Struct("<8sIIQQ")
_ROW = struct.Struct("<Q16sQQII")
ROW_SIZE = _ROW.size


class ResultStore:
    """Append-only map (e, subgroup fingerprint) -> (m, witness hash)."""

    def __init__(self, path: str | os.PathLike):
        self.path = os.fspath(path)
        self.rows: dict[tuple[int, bytes], tuple[int, int]] = {}
        self._pending: list[tuple[int, bytes, int, int]] = []
        if os.path.exists(self.path):
            self._load()

    def _load(self) -> None:
        with open(self.path, "rb") as fh:
            blob = fh.read()
        if len(blob) < _HEADER.size:
            raise StoreError(f"{self.path}: truncated header")
        magic, version, row_size, _, _ = _HEADER.unpack_from(blob, 0)
        if magic != MAGIC:
            raise StoreError(f"{self.path}: bad magic {magic!r}")
        if version != VERSION:
            raise StoreError(f"{self.path}: unsupported version {version}")
        if row_size != ROW_SIZE:
            raise StoreError(f"{self.path}: row size {row_size} != {ROW_SIZE}")
        body = blob[_HEADER.size:]
        if len(body) % ROW_SIZE:
            raise StoreError(f"{self.path}: trailing partial row")
        for off in range(0, len(body), ROW_SIZE):
            e, fp, m, whash, crc, _ = _ROW.unpack_from(body, off)
            if crc != zlib.crc32(body[off:off + ROW_SIZE - 8]):
                raise StoreError(f"{self.path}: row checksum mismatch at offset {off}")
            self.rows[(e, fp)] = (m, whash)

    def add(self, e: int, fingerprint: bytes, m: int, whash: int = 0) -> None:
        key = (e, fingerprint)
        old = self.rows.get(key)
        if old is not None:
            if old[0] != m:
                raise StoreError(
                    f"conflicting m for e={e}, key={fingerprint.hex()}: {old[0]} vs {m}"
                )
            return
        self.rows[key] = (m, whash)
        self._pending.append((e, fingerprint, m, whash))

    def add_rows(self, rows) -> None:
        for e, fp, m in rows:
            self.add(e, fp, m)

    @property
    def e_range(self) -> tuple[int, int]:
        if not self.rows:
            return (0, 0)
        es = [e for e, _ in self.rows]
        return (min(es), max(es))

    def save(self) -> None:
        """Append pending rows; refresh the header's e-range in place."""
        e_min, e_max = self.e_range
        header = _HEADER.pack(MAGIC, VERSION, ROW_SIZE, e_min, e_max)
        fresh = not os.path.exists(self.path)
        with open(self.path, "r+b" if not fresh else "wb") as fh:
            fh.seek(0)
            fh.write(header)
            fh.seek(0, os.SEEK_END)
            for e, fp, m, whash in self._pending:
                body = _ROW.pack(e, fp, m, whash, 0, 0)[:-8]
                fh.write(body + struct.pack("<II", zlib.crc32(body), 0))
        self._pending.clear()

    def cache_rows(self):
        """(e, fingerprint, m) triples for seeding the engine cache."""
        return [(e, fp, m) for (e, fp), (m, _) in self.rows.items()]

    def __len__(self) -> int:
        return len(self.rows)
