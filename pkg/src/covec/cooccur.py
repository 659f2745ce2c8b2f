"""Sparse windowed co-occurrence counting with marginals and grand total.

Counting is symmetric: every in-window position pair contributes to both
(w, c) and (c, w). With distance weighting on, a pair at offset d adds 1/d.

Weights are accumulated as scaled integers (one increment of lcm(1..window)//d
per event) and divided once at the end, so per-cell totals do not depend on
the order events were seen. Sharded counting, single-threaded counting, and
naive enumeration therefore produce bit-identical tables. The integer path
covers window <= 20; beyond that the scale factor would risk int64 overflow
and counting falls back to plain float accumulation.
"""

from __future__ import annotations

import concurrent.futures
import math
from pathlib import Path

import numpy as np
from numba import njit, types
from numba.typed import Dict

from .corpus import TokenStream
from .errors import CoocFormatError

_RECORD_DTYPE = np.dtype([("i", "<u4"), ("j", "<u4"), ("w", "<f8")])
_MAX_INT_WINDOW = 20


class CoocTable:
    """Sparse #(w,c) table, cells sorted by (word_id, context_id).

    Only observed pairs are stored; every stored weight is positive.
    Marginals and the grand total are derived from the cells on construction.
    """

    def __init__(self, vocab_size: int, row: np.ndarray, col: np.ndarray,
                 weight: np.ndarray):
        self.vocab_size = int(vocab_size)
        self.row = np.ascontiguousarray(row, dtype=np.int32)
        self.col = np.ascontiguousarray(col, dtype=np.int32)
        self.weight = np.ascontiguousarray(weight, dtype=np.float64)
        if not (self.row.size == self.col.size == self.weight.size):
            raise ValueError("row/col/weight length mismatch")
        self._keys = _pack_keys(self.row, self.col)
        self.word_marginals = np.bincount(
            self.row, weights=self.weight, minlength=self.vocab_size)
        self.context_marginals = np.bincount(
            self.col, weights=self.weight, minlength=self.vocab_size)
        self.total = float(self.word_marginals.sum())

    @classmethod
    def from_triples(cls, row, col, weight, vocab_size: int) -> "CoocTable":
        """Build from unsorted triples; duplicate cells are summed in order."""
        row = np.asarray(row, dtype=np.int64)
        col = np.asarray(col, dtype=np.int64)
        weight = np.asarray(weight, dtype=np.float64)
        if row.size == 0:
            return cls(vocab_size, row, col, weight)
        keys = (row << 32) | col
        order = np.argsort(keys, kind="stable")
        keys = keys[order]
        weight = weight[order]
        starts = np.flatnonzero(np.r_[True, keys[1:] != keys[:-1]])
        summed = np.add.reduceat(weight, starts)
        uniq = keys[starts]
        return cls(vocab_size, uniq >> 32, uniq & 0xFFFFFFFF, summed)

    @property
    def nnz(self) -> int:
        return int(self.row.size)

    def has(self, i: int, j: int) -> bool:
        return self._find(i, j) >= 0

    def get(self, i: int, j: int) -> float:
        """Weight of an observed cell; KeyError if the pair was never seen."""
        idx = self._find(i, j)
        if idx < 0:
            raise KeyError((i, j))
        return float(self.weight[idx])

    def _find(self, i: int, j: int) -> int:
        key = (np.int64(i) << np.int64(32)) | np.int64(j)
        pos = int(np.searchsorted(self._keys, key))
        if pos < self._keys.size and self._keys[pos] == key:
            return pos
        return -1

    def cells(self):
        for i, j, w in zip(self.row, self.col, self.weight):
            yield int(i), int(j), float(w)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoocTable):
            return NotImplemented
        return (self.vocab_size == other.vocab_size
                and np.array_equal(self.row, other.row)
                and np.array_equal(self.col, other.col)
                and np.array_equal(self.weight, other.weight))

    def __repr__(self) -> str:
        return (f"CoocTable(vocab_size={self.vocab_size}, nnz={self.nnz}, "
                f"total={self.total!r})")


def _pack_keys(row: np.ndarray, col: np.ndarray) -> np.ndarray:
    return (row.astype(np.int64) << 32) | col.astype(np.int64)


@njit(cache=True, nogil=True)
def _count_ints(ids, start, stop, window, increments, table):
    # Backward scan: center p pairs with q in [p-window, p-1]; both
    # directions of the pair are recorded at the same event.
    for p in range(start, stop):
        i = np.int64(ids[p])
        d_max = min(window, p)
        for d in range(1, d_max + 1):
            j = np.int64(ids[p - d])
            inc = increments[d]
            k1 = (i << 32) | j
            k2 = (j << 32) | i
            table[k1] = table.get(k1, 0) + inc
            table[k2] = table.get(k2, 0) + inc


@njit(cache=True, nogil=True)
def _count_floats(ids, start, stop, window, distance_weighting, table):
    for p in range(start, stop):
        i = np.int64(ids[p])
        d_max = min(window, p)
        for d in range(1, d_max + 1):
            j = np.int64(ids[p - d])
            w = 1.0 / d if distance_weighting else 1.0
            k1 = (i << 32) | j
            k2 = (j << 32) | i
            table[k1] = table.get(k1, 0.0) + w
            table[k2] = table.get(k2, 0.0) + w


@njit(cache=True, nogil=True)
def _dict_to_arrays_int(table):
    n = len(table)
    keys = np.empty(n, np.int64)
    vals = np.empty(n, np.int64)
    pos = 0
    for k, v in table.items():
        keys[pos] = k
        vals[pos] = v
        pos += 1
    return keys, vals


@njit(cache=True, nogil=True)
def _dict_to_arrays_float(table):
    n = len(table)
    keys = np.empty(n, np.int64)
    vals = np.empty(n, np.float64)
    pos = 0
    for k, v in table.items():
        keys[pos] = k
        vals[pos] = v
        pos += 1
    return keys, vals


@njit(cache=True, nogil=True)
def _merge_int_dicts(dst, src):
    for k, v in src.items():
        dst[k] = dst.get(k, 0) + v


@njit(cache=True, nogil=True)
def _merge_float_dicts(dst, src):
    for k, v in src.items():
        dst[k] = dst.get(k, 0.0) + v


def count(stream: TokenStream, window: int, distance_weighting: bool = True,
          threads: int = 1) -> CoocTable:
    """Count symmetric windowed co-occurrences over an id stream.

    With threads > 1 the stream is split into contiguous center ranges and
    counted by parallel shard workers; the integer accumulation makes the
    merged result identical to a single-threaded scan.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    ids = stream.ids
    n = ids.size
    use_ints = (not distance_weighting) or window <= _MAX_INT_WINDOW
    if use_ints:
        scale = math.lcm(*range(1, window + 1)) if distance_weighting else 1
        increments = np.array(
            [0] + [scale // d if distance_weighting else 1
                   for d in range(1, window + 1)],
            dtype=np.int64)

    nshards = max(1, min(threads, n))
    bounds = np.linspace(0, n, nshards + 1).astype(np.int64)

    def count_shard(start: int, stop: int):
        if use_ints:
            shard = Dict.empty(types.int64, types.int64)
            _count_ints(ids, start, stop, window, increments, shard)
        else:
            shard = Dict.empty(types.int64, types.float64)
            _count_floats(ids, start, stop, window, distance_weighting, shard)
        return shard

    if nshards > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=nshards) as pool:
            shards = list(pool.map(count_shard,
                                   bounds[:-1].tolist(), bounds[1:].tolist()))
        acc = shards[0]
        for shard in shards[1:]:
            if use_ints:
                _merge_int_dicts(acc, shard)
            else:
                _merge_float_dicts(acc, shard)
    else:
        acc = count_shard(0, n)

    if use_ints:
        keys, ivals = _dict_to_arrays_int(acc)
        vals = ivals / float(scale) if distance_weighting else ivals.astype(np.float64)
    else:
        keys, vals = _dict_to_arrays_float(acc)
    order = np.argsort(keys)
    keys = keys[order]
    vals = vals[order]
    return CoocTable(stream.vocab_size, keys >> 32, keys & 0xFFFFFFFF, vals)


def merge(tables: list[CoocTable]) -> CoocTable:
    """Cell-wise sum of tables over the same vocabulary."""
    if not tables:
        raise ValueError("merge needs at least one table")
    vocab_size = tables[0].vocab_size
    for t in tables[1:]:
        if t.vocab_size != vocab_size:
            raise ValueError(
                f"vocabulary size mismatch: {t.vocab_size} != {vocab_size}")
    row = np.concatenate([t.row for t in tables])
    col = np.concatenate([t.col for t in tables])
    weight = np.concatenate([t.weight for t in tables])
    return CoocTable.from_triples(row, col, weight, vocab_size)


def save(table: CoocTable, path: str | Path) -> None:
    """Write little-endian (u32 word, u32 context, f64 weight) records."""
    records = np.empty(table.nnz, dtype=_RECORD_DTYPE)
    records["i"] = table.row
    records["j"] = table.col
    records["w"] = table.weight
    with open(path, "wb") as fh:
        fh.write(records.tobytes())


def load(path: str | Path, vocab_size: int | None = None) -> CoocTable:
    """Read a triple file back into a table.

    The format has no header, so the vocabulary size is inferred from the
    largest id unless given. Truncated or invalid records raise
    CoocFormatError with the offending byte offset.
    """
    raw = Path(path).read_bytes()
    rec = _RECORD_DTYPE.itemsize
    if len(raw) % rec != 0:
        raise CoocFormatError(
            f"truncated record in {path}", offset=len(raw) - len(raw) % rec)
    records = np.frombuffer(raw, dtype=_RECORD_DTYPE)
    bad = np.flatnonzero(~(np.isfinite(records["w"]) & (records["w"] > 0)))
    if bad.size:
        raise CoocFormatError(
            f"non-positive or non-finite weight in {path}",
            offset=int(bad[0]) * rec)
    if vocab_size is None:
        vocab_size = 0
        if records.size:
            vocab_size = int(max(records["i"].max(), records["j"].max())) + 1
    return CoocTable.from_triples(
        records["i"].astype(np.int64), records["j"].astype(np.int64),
        records["w"], vocab_size)
