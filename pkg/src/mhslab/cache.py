"""Append-only on-disk memo for comp_sum residues.

One JSON object per line, ``{kind, n, m, p, r, k, value, sum}``, where ``sum``
is a SHA-256 digest of the other fields.  A record whose digest does not match
is reported with a :class:`CorruptCache` warning and ignored, so the value is
recomputed.  Each record goes out in a single ``O_APPEND`` write, which keeps
concurrent writers from interleaving partial lines.
"""

from __future__ import annotations

import hashlib
import json
import os
import warnings
from pathlib import Path
from typing import Optional

from .errors import CorruptCache

FILENAME = "residues.ndjson"
FIELDS = ("kind", "n", "m", "p", "r", "k")


def _digest(key: tuple, value: int) -> str:
    text = json.dumps([*key, value], separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()[:16]


class ResidueCache:
    def __init__(self, directory):
        self.dir = Path(directory)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.path = self.dir / FILENAME
        self._memo: dict[tuple, int] = {}
        self.corrupt = 0
        self._read()

    def _read(self) -> None:
        if not self.path.exists():
            return
        with open(self.path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    rec = json.loads(line)
                    key = tuple(rec[f] for f in FIELDS)
                    value = rec["value"]
                    ok = rec.get("sum") == _digest(key, value)
                except (ValueError, KeyError, TypeError):
                    ok = False
                if not ok:
                    self.corrupt += 1
                    warnings.warn(f"{self.path}:{lineno}: checksum mismatch, record ignored",
                                  CorruptCache, stacklevel=2)
                    continue
                self._memo[key] = value

    def load(self, kind, n, m, p, r, k) -> Optional[int]:
        return self._memo.get((kind, n, m, p, r, k))

    def store(self, kind, n, m, p, r, k, value: int) -> None:
        key = (kind, n, m, p, r, k)
        if self._memo.get(key) == value:
            return
        self._memo[key] = value
        rec = dict(zip(FIELDS, key), value=value, sum=_digest(key, value))
        line = (json.dumps(rec, separators=(",", ":")) + "\n").encode()
        fd = os.open(self.path, os.O_WRONLY | os.O_APPEND | os.O_CREAT, 0o644)
        try:
            os.write(fd, line)
        finally:
            os.close(fd)

    def __len__(self) -> int:
        return len(self._memo)
