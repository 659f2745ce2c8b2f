"""Bias-term convergence tracking.

After each training epoch the GloVe bias vectors are correlated against the
log marginal counts; a rising correlation means the free biases are drifting
toward the log-count terms that SGNS hard-wires into its optimum.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .cooccur import CoocTable
from .corpus import Vocabulary
from .errors import ZeroMarginalError
from .glove import GloveParams
from .ioutil import fmt_float


def pearson_r(x, y) -> float:
    """Product-moment correlation, clamped to [-1, 1] against rounding."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("inputs must be 1-d and the same length")
    if x.size < 2:
        raise ValueError("need at least two points")
    dx = x - x.mean()
    dy = y - y.mean()
    sx = float(dx @ dx)
    sy = float(dy @ dy)
    if sx == 0.0 or sy == 0.0:
        raise ValueError("correlation undefined for a constant vector")
    r = float(dx @ dy) / np.sqrt(sx * sy)
    return float(min(1.0, max(-1.0, r)))


@dataclass(frozen=True)
class TraceRecord:
    iteration: int
    r_word: float
    r_context: float
    r_sum: float


@dataclass
class BiasTrace:
    """Per-iteration correlation records, iterations strictly increasing."""

    records: list[TraceRecord] = field(default_factory=list)

    def append(self, record: TraceRecord) -> None:
        if self.records and record.iteration <= self.records[-1].iteration:
            raise ValueError("iterations must be strictly increasing")
        for r in (record.r_word, record.r_context, record.r_sum):
            if not -1.0 <= r <= 1.0:
                raise ValueError("correlations must lie in [-1, 1]")
        self.records.append(record)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)


def correlate_biases(params: GloveParams, table: CoocTable, iteration: int,
                     pair_sample: int = 100_000, seed: int = 0) -> TraceRecord:
    """Correlate biases with log marginals; r_sum over sampled observed cells.

    The full pair set is quadratic, so r_sum uses `pair_sample` cells drawn
    uniformly (with replacement) from the observed cells with a seeded RNG.
    Marginals are the weighted, possibly fractional counts the trainer saw.
    """
    if params.vocab_size == 0:
        raise ValueError("empty vocabulary")
    if pair_sample < 2:
        raise ValueError("pair_sample must be >= 2")
    if (table.word_marginals <= 0).any() or (table.context_marginals <= 0).any():
        raise ZeroMarginalError("every vocabulary id needs a positive marginal")
    log_w = np.log(table.word_marginals)
    log_c = np.log(table.context_marginals)
    r_word = pearson_r(params.b_w, log_w)
    r_context = pearson_r(params.b_c, log_c)
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, table.nnz, size=pair_sample)
    i = table.row[idx]
    j = table.col[idx]
    r_sum = pearson_r(params.b_w[i] + params.b_c[j], log_w[i] + log_c[j])
    return TraceRecord(iteration=iteration, r_word=r_word,
                       r_context=r_context, r_sum=r_sum)


def export_trace(trace: BiasTrace, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("iter,r_word,r_context,r_sum\n")
        for rec in trace:
            fh.write(f"{rec.iteration},{fmt_float(rec.r_word)},"
                     f"{fmt_float(rec.r_context)},{fmt_float(rec.r_sum)}\n")


def load_trace(path: str | Path) -> BiasTrace:
    trace = BiasTrace()
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != "iter,r_word,r_context,r_sum":
            raise ValueError(f"unexpected trace header {header!r}")
        for line in fh:
            it, rw, rc, rs = line.rstrip("\n").split(",")
            trace.append(TraceRecord(int(it), float(rw), float(rc), float(rs)))
    return trace


def export_scatter(params: GloveParams, vocab: Vocabulary, table: CoocTable,
                   path: str | Path) -> None:
    """One row per vocabulary entry: word bias against its log marginal count."""
    if params.vocab_size != len(vocab) or table.vocab_size != len(vocab):
        raise ValueError("params, vocabulary, and table must agree on size")
    if (table.word_marginals <= 0).any():
        raise ZeroMarginalError("every vocabulary id needs a positive marginal")
    log_w = np.log(table.word_marginals)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("token,count,log_count,bias\n")
        for i, (tok, _) in enumerate(vocab.entries):
            fh.write(f"{tok},{fmt_float(table.word_marginals[i])},"
                     f"{fmt_float(log_w[i])},{fmt_float(params.b_w[i])}\n")


def load_scatter(path: str | Path):
    """Returns (tokens, counts, log_counts, biases) as parallel arrays."""
    tokens: list[str] = []
    cols: tuple[list[float], list[float], list[float]] = ([], [], [])
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != "token,count,log_count,bias":
            raise ValueError(f"unexpected scatter header {header!r}")
        for line in fh:
            tok, c, lc, b = line.rstrip("\n").split(",")
            tokens.append(tok)
            cols[0].append(float(c))
            cols[1].append(float(lc))
            cols[2].append(float(b))
    return (tokens, np.asarray(cols[0]), np.asarray(cols[1]),
            np.asarray(cols[2]))
