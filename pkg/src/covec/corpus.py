"""Tokenization, vocabulary construction, and corpus encoding.

A single vocabulary is shared between words and contexts: the counting
module reads both sides of every window pair from the same id space.
"""

from __future__ import annotations

import concurrent.futures
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


def tokenize(text: str) -> list[str]:
    """Lowercase and split on any whitespace; empty tokens never appear."""
    return text.lower().split()


@dataclass(frozen=True)
class Vocabulary:
    """Ordered token/count table with dense ids 0..n-1.

    Ids are assigned by decreasing count, ties broken lexicographically,
    so construction is deterministic for a given corpus.
    """

    entries: tuple[tuple[str, int], ...]
    index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(
            self, "index", {tok: i for i, (tok, _) in enumerate(self.entries)}
        )

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, token: str) -> bool:
        return token in self.index

    def id(self, token: str) -> int:
        return self.index[token]

    def token(self, word_id: int) -> str:
        return self.entries[word_id][0]

    def count(self, word_id: int) -> int:
        return self.entries[word_id][1]

    @property
    def tokens(self) -> list[str]:
        return [tok for tok, _ in self.entries]


@dataclass(frozen=True)
class TokenStream:
    """Encoded corpus: word ids in corpus order, OOV tokens already dropped."""

    ids: np.ndarray  # int32
    vocab_size: int

    def __post_init__(self):
        ids = np.ascontiguousarray(self.ids, dtype=np.int32)
        object.__setattr__(self, "ids", ids)
        if ids.size and (ids.min() < 0 or ids.max() >= self.vocab_size):
            raise ValueError("token id out of range for vocabulary")

    def __len__(self) -> int:
        return int(self.ids.size)


def count_tokens(tokens: Iterable[str]) -> Counter:
    """Raw frequency map; the mergeable unit for sharded vocabulary scans."""
    return Counter(tokens)


def vocab_from_counts(counts: Counter, min_count: int) -> Vocabulary:
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    kept = [(tok, c) for tok, c in counts.items() if c >= min_count]
    kept.sort(key=lambda tc: (-tc[1], tc[0]))
    return Vocabulary(entries=tuple(kept))


def build_vocab(tokens: Sequence[str], min_count: int) -> Vocabulary:
    """Keep tokens occurring at least min_count times, ids in count order."""
    return vocab_from_counts(count_tokens(tokens), min_count)


def build_vocab_from_files(
    paths: Sequence[str | Path], min_count: int, workers: int = 1
) -> Vocabulary:
    """Scan text files (optionally in parallel) and merge their count maps.

    Counter merging is integer addition, so the result is identical to a
    single-threaded scan regardless of worker count.
    """
    paths = [Path(p) for p in paths]
    if workers > 1 and len(paths) > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(_count_file, paths))
    else:
        partials = [_count_file(p) for p in paths]
    total: Counter = Counter()
    for c in partials:
        total.update(c)
    return vocab_from_counts(total, min_count)


def _count_file(path: Path) -> Counter:
    counts: Counter = Counter()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            counts.update(tokenize(line))
    return counts


def encode(tokens: Sequence[str], vocab: Vocabulary) -> TokenStream:
    """Map in-vocabulary tokens to ids in order; OOV tokens are deleted."""
    index = vocab.index
    ids = [index[t] for t in tokens if t in index]
    return TokenStream(ids=np.asarray(ids, dtype=np.int32), vocab_size=len(vocab))


def encode_files(paths: Sequence[str | Path], vocab: Vocabulary) -> TokenStream:
    """Encode several files as one stream, concatenated in argument order."""
    index = vocab.index
    ids: list[int] = []
    for path in paths:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                ids.extend(index[t] for t in tokenize(line) if t in index)
    return TokenStream(ids=np.asarray(ids, dtype=np.int32), vocab_size=len(vocab))


def save_vocab(vocab: Vocabulary, path: str | Path) -> None:
    """One `token<SPACE>count` line per entry, in id order."""
    with open(path, "w", encoding="utf-8") as fh:
        for tok, c in vocab.entries:
            fh.write(f"{tok} {c}\n")


def load_vocab(path: str | Path) -> Vocabulary:
    entries = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            parts = line.rstrip("\n").split(" ")
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'token count'")
            entries.append((parts[0], int(parts[1])))
    return Vocabulary(entries=tuple(entries))
