"""Small shared I/O helpers."""

from __future__ import annotations

import hashlib
from pathlib import Path


def fmt_float(v: float) -> str:
    """Shortest decimal that parses back to the exact same float.

    Integral values drop the trailing '.0' (0.0 -> '0', 1.5 -> '1.5').
    """
    s = repr(float(v))
    return s[:-2] if s.endswith(".0") else s


def sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()
