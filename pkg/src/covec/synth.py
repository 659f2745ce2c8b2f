"""Synthetic topical corpora for desk-scale experiments.

Documents pick a topic, then draw tokens from a Zipf distribution whose
mass is boosted on that topic's word subset. The boost gives the corpus
real co-occurrence structure (topical words see each other more often than
independence predicts) while keeping unigram counts Zipf-shaped, which is
what the min-count/vocabulary machinery expects from natural text.
Generation is fully seeded and chunked deterministically.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

_WRITE_CHUNK_DOCS = 4096


def generate_corpus(path: str | Path, n_tokens: int, n_types: int = 20_000,
                    n_topics: int = 50, doc_len: int = 200,
                    zipf_exponent: float = 1.05, topic_boost: float = 20.0,
                    seed: int = 0) -> int:
    """Write a whitespace-tokenized corpus of ~n_tokens tokens; returns the count.

    Tokens are w00000..wNNNNN so the vocabulary is easy to eyeball; ids do
    not correspond to frequency ranks once topic boosts are applied.
    """
    if n_tokens < 1 or doc_len < 1:
        raise ValueError("n_tokens and doc_len must be positive")
    rng = np.random.default_rng(seed)
    base = np.arange(1, n_types + 1, dtype=np.float64) ** -zipf_exponent
    topic_of = rng.integers(0, n_topics, size=n_types)

    n_docs = (n_tokens + doc_len - 1) // doc_len
    doc_topics = rng.integers(0, n_topics, size=n_docs)
    docs = np.empty((n_docs, doc_len), dtype=np.int32)
    for t in range(n_topics):
        members = np.flatnonzero(doc_topics == t)
        if members.size == 0:
            continue
        p = base * np.where(topic_of == t, topic_boost, 1.0)
        p /= p.sum()
        draws = rng.choice(n_types, size=members.size * doc_len, p=p)
        docs[members] = draws.reshape(members.size, doc_len).astype(np.int32)

    words = np.array([f"w{i:05d}" for i in range(n_types)])
    written = 0
    with open(path, "w", encoding="utf-8") as fh:
        for s in range(0, n_docs, _WRITE_CHUNK_DOCS):
            chunk = docs[s:s + _WRITE_CHUNK_DOCS]
            lines = [" ".join(row) for row in words[chunk]]
            fh.write("\n".join(lines) + "\n")
            written += chunk.size
    return written
