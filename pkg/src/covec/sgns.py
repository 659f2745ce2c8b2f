"""Skip-gram with negative sampling.

Two trainers share the objective. The matrix trainer does gradient ascent
on the expected per-cell objective

    x_ij * log sig(W_i . C_j) + k * #(w_i) * #(c_j)/total * log sig(-W_i . C_j)

which makes the shifted-PMI optimum checkable without sampling noise. The
stream trainer is the sampled algorithm: one positive update per window
pair plus k noise draws from the unigram distribution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numba
import numpy as np
from numba import njit, prange

from .alias import AliasTable
from .cooccur import CoocTable
from .corpus import TokenStream, Vocabulary
from .errors import TrainingDivergedError


@dataclass(frozen=True)
class SgnsConfig:
    k: int = 5
    dim: int = 300
    eta: float = 0.05
    epochs: int = 5
    seed: int = 1
    smoothing: float = 1.0  # exponent on the noise distribution
    threads: int = 1

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.eta <= 0:
            raise ValueError("eta must be positive")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if not 0 < self.smoothing <= 1:
            raise ValueError("smoothing must be in (0, 1]")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


@dataclass
class SgnsParams:
    W: np.ndarray
    C: np.ndarray

    @property
    def vocab_size(self) -> int:
        return self.W.shape[0]

    @property
    def dim(self) -> int:
        return self.W.shape[1]


def sigmoid(x):
    """1/(1+e^-x), sign-split so neither branch can overflow."""
    if np.ndim(x) == 0:
        x = float(x)
        if x >= 0:
            return 1.0 / (1.0 + math.exp(-x))
        e = math.exp(x)
        return e / (1.0 + e)
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    e = np.exp(x[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def log_sigmoid(x):
    """log sig(x) = -log(1 + e^-x), stable for any finite x."""
    return -np.logaddexp(0.0, -np.asarray(x, dtype=np.float64))


def _check_counts(n_wc, n_w, n_c, total, k):
    if n_wc <= 0 or n_w <= 0 or n_c <= 0 or total <= 0:
        raise ValueError("counts must be positive")
    if k < 1:
        raise ValueError("k must be >= 1")


def expected_local_objective(x: float, n_wc: float, n_w: float, n_c: float,
                             total: float, k: int) -> float:
    """Per-pair objective at dot product x, in expectation over noise draws."""
    _check_counts(n_wc, n_w, n_c, total, k)
    noise_mass = k * n_w * (n_c / total)
    return float(n_wc * log_sigmoid(x) + noise_mass * log_sigmoid(-x))


def local_derivative(x: float, n_wc: float, n_w: float, n_c: float,
                     total: float, k: int) -> float:
    """d/dx of the expected local objective; strictly decreasing in x."""
    _check_counts(n_wc, n_w, n_c, total, k)
    return float(n_wc * sigmoid(-x) - k * n_w * (n_c / total) * sigmoid(x))


def solve_optimum(n_wc: float, n_w: float, n_c: float, total: float,
                  k: int) -> float:
    """Closed-form root of the local derivative: PMI - log k."""
    _check_counts(n_wc, n_w, n_c, total, k)
    return (math.log(n_wc) - math.log(n_w) - math.log(n_c)
            + math.log(total) - math.log(k))


@njit(cache=True, nogil=True, inline="always")
def _sig(x):
    if x >= 0.0:
        return 1.0 / (1.0 + np.exp(-x))
    e = np.exp(x)
    return e / (1.0 + e)


@njit(cache=True, nogil=True)
def _matrix_epoch_seq(row, col, pos_c, neg_c, order, W, C, aW, aC, eta):
    d = W.shape[1]
    for t in range(order.size):
        idx = order[t]
        i = row[idx]
        j = col[idx]
        dot = 0.0
        for q in range(d):
            dot += W[i, q] * C[j, q]
        if not np.isfinite(dot):
            return idx
        # ascent on pos*log sig(x) + neg*log sig(-x)
        g = pos_c[idx] * _sig(-dot) - neg_c[idx] * _sig(dot)
        for q in range(d):
            gw = g * C[j, q]
            gc = g * W[i, q]
            aW[i, q] += gw * gw
            aC[j, q] += gc * gc
            W[i, q] += eta * gw / np.sqrt(aW[i, q])
            C[j, q] += eta * gc / np.sqrt(aC[j, q])
    return -1


@njit(cache=True, nogil=True, parallel=True)
def _matrix_epoch_par(row, col, pos_c, neg_c, order, W, C, aW, aC, eta, bad):
    d = W.shape[1]
    for t in prange(order.size):
        idx = order[t]
        i = row[idx]
        j = col[idx]
        dot = 0.0
        for q in range(d):
            dot += W[i, q] * C[j, q]
        if not np.isfinite(dot):
            bad[0] = idx
        else:
            g = pos_c[idx] * _sig(-dot) - neg_c[idx] * _sig(dot)
            for q in range(d):
                gw = g * C[j, q]
                gc = g * W[i, q]
                aW[i, q] += gw * gw
                aC[j, q] += gc * gc
                W[i, q] += eta * gw / np.sqrt(aW[i, q])
                C[j, q] += eta * gc / np.sqrt(aC[j, q])


@njit(cache=True, nogil=True)
def _objective_kernel(row, col, pos_c, neg_c, W, C):
    d = W.shape[1]
    total = 0.0
    for idx in range(row.size):
        i = row[idx]
        j = col[idx]
        dot = 0.0
        for q in range(d):
            dot += W[i, q] * C[j, q]
        # log sig via logaddexp-style stable form
        if dot >= 0.0:
            lp = -np.log1p(np.exp(-dot))
            ln = -dot - np.log1p(np.exp(-dot))
        else:
            lp = dot - np.log1p(np.exp(dot))
            ln = -np.log1p(np.exp(dot))
        total += pos_c[idx] * lp + neg_c[idx] * ln
    return total


def total_objective(table: CoocTable, params: SgnsParams, k: int) -> float:
    """Expected objective summed over observed cells (to be maximized)."""
    pos_c, neg_c = _cell_masses(table, k)
    return float(_objective_kernel(table.row, table.col, pos_c, neg_c,
                                   params.W, params.C))


def _cell_masses(table: CoocTable, k: int):
    pos_c = table.weight
    neg_c = (k * table.word_marginals[table.row]
             * table.context_marginals[table.col] / table.total)
    return pos_c, neg_c


def _init_params(vocab_size: int, dim: int, rng) -> SgnsParams:
    bound = 0.5 / dim
    return SgnsParams(
        W=rng.uniform(-bound, bound, (vocab_size, dim)),
        C=rng.uniform(-bound, bound, (vocab_size, dim)),
    )


def train_matrix(table: CoocTable, cfg: SgnsConfig,
                 on_epoch: Optional[Callable[[int, SgnsParams], None]] = None,
                 ) -> SgnsParams:
    """AdaGrad ascent on the expected objective over all observed cells."""
    if table.nnz == 0:
        raise ValueError("cannot train on an empty table")
    if (table.word_marginals <= 0).any() or (table.context_marginals <= 0).any():
        raise ValueError("all marginals must be positive")
    pos_c, neg_c = _cell_masses(table, cfg.k)
    return train_cells(table.row, table.col, pos_c, neg_c,
                       table.vocab_size, cfg, on_epoch)


def train_cells(row: np.ndarray, col: np.ndarray, pos_mass: np.ndarray,
                neg_mass: np.ndarray, vocab_size: int, cfg: SgnsConfig,
                on_epoch: Optional[Callable[[int, SgnsParams], None]] = None,
                ) -> SgnsParams:
    """Ascent on sum of pos*log sig(W_i.C_j) + neg*log sig(-W_i.C_j).

    The cells-level entry point: train_matrix derives the masses from a
    table, but they can also be supplied directly. Accumulate-then-update
    AdaGrad bounds every step by eta, which keeps large raw counts in the
    gradients from blowing up early epochs.
    """
    if row.size == 0:
        raise ValueError("no cells to train on")
    if (pos_mass <= 0).any() or (neg_mass <= 0).any():
        raise ValueError("cell masses must be positive")
    rng = np.random.default_rng(cfg.seed)
    params = _init_params(vocab_size, cfg.dim, rng)
    aW = np.ones_like(params.W)
    aC = np.ones_like(params.C)
    threads = min(cfg.threads, numba.config.NUMBA_NUM_THREADS)
    if threads > 1:
        numba.set_num_threads(threads)
    bad = np.full(1, -1, dtype=np.int64)
    for epoch in range(1, cfg.epochs + 1):
        order = rng.permutation(row.size)
        if threads > 1:
            bad[0] = -1
            _matrix_epoch_par(row, col, pos_mass, neg_mass, order,
                              params.W, params.C, aW, aC, cfg.eta, bad)
            bad_idx = int(bad[0])
        else:
            bad_idx = int(_matrix_epoch_seq(row, col, pos_mass, neg_mass,
                                            order, params.W, params.C,
                                            aW, aC, cfg.eta))
        if bad_idx >= 0:
            raise TrainingDivergedError(
                epoch, int(row[bad_idx]), int(col[bad_idx]))
        if on_epoch is not None:
            on_epoch(epoch, params)
    if not (np.isfinite(params.W).all() and np.isfinite(params.C).all()):
        raise TrainingDivergedError(cfg.epochs, -1, -1)
    return params


@njit(cache=True, nogil=True)
def _stream_epoch(ids, window, k, eta, W, C, prob, alias, seed):
    np.random.seed(seed)
    n = ids.size
    V = W.shape[0]
    d = W.shape[1]
    neu = np.empty(d)
    for p in range(n):
        i = ids[p]
        lo = p - window
        if lo < 0:
            lo = 0
        hi = p + window
        if hi > n - 1:
            hi = n - 1
        for q in range(lo, hi + 1):
            if q == p:
                continue
            j = ids[q]
            for t in range(d):
                neu[t] = 0.0
            dot = 0.0
            for t in range(d):
                dot += W[i, t] * C[j, t]
            if not np.isfinite(dot):
                return p
            g = eta * (1.0 - _sig(dot))
            for t in range(d):
                neu[t] += g * C[j, t]
                C[j, t] += g * W[i, t]
            for _ in range(k):
                b = int(np.random.random() * V)
                if b >= V:
                    b = V - 1
                jn = b if np.random.random() < prob[b] else alias[b]
                dot = 0.0
                for t in range(d):
                    dot += W[i, t] * C[jn, t]
                g = -eta * _sig(dot)
                for t in range(d):
                    neu[t] += g * C[jn, t]
                    C[jn, t] += g * W[i, t]
            for t in range(d):
                W[i, t] += neu[t]
    return -1


def noise_distribution(vocab: Vocabulary, smoothing: float = 1.0) -> np.ndarray:
    """Unigram weights count^smoothing; smoothing 1.0 is the plain unigram."""
    counts = np.array([c for _, c in vocab.entries], dtype=np.float64)
    return counts ** smoothing


def train_stream(stream: TokenStream, vocab: Vocabulary, window: int,
                 cfg: SgnsConfig) -> SgnsParams:
    """Sampled SGNS over the id stream.

    Every (center, context) pair in the symmetric window gets one positive
    update and k negative updates with contexts drawn from the noise
    distribution; draws are not deduplicated against the positive context.
    Single-threaded and deterministic for a fixed seed.
    """
    if len(stream) == 0:
        raise ValueError("cannot train on an empty stream")
    if window < 1:
        raise ValueError("window must be >= 1")
    if stream.vocab_size != len(vocab):
        raise ValueError("stream and vocabulary disagree on size")
    noise = AliasTable(noise_distribution(vocab, cfg.smoothing))
    rng = np.random.default_rng(cfg.seed)
    params = _init_params(len(vocab), cfg.dim, rng)
    for epoch in range(1, cfg.epochs + 1):
        kernel_seed = int(rng.integers(0, 2**31 - 1))
        bad_pos = int(_stream_epoch(stream.ids, window, cfg.k, cfg.eta,
                                    params.W, params.C,
                                    noise.prob, noise.alias, kernel_seed))
        if bad_pos >= 0:
            raise TrainingDivergedError(epoch, int(stream.ids[bad_pos]), -1)
    if not (np.isfinite(params.W).all() and np.isfinite(params.C).all()):
        raise TrainingDivergedError(cfg.epochs, -1, -1)
    return params
