"""GloVe: weighted least-squares factorization of log co-occurrence counts.

The local cost for an observed cell (i, j) with count x is

    f(x) * (W_i . C_j + b_w[i] + b_c[j] - log x)^2

where f down-weights rare pairs and unobserved pairs contribute nothing.
Training runs AdaGrad SGD over all observed cells in shuffled order, with
update-then-accumulate ordering and initial accumulator 1.0 as in the
reference tool. The scalar gradient is clamped to +-clip by default to
survive early-epoch blowups on small dimensions; set clip=0 to disable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numba
import numpy as np
from numba import njit, prange

from .cooccur import CoocTable
from .corpus import Vocabulary
from .errors import TrainingDivergedError
from .ioutil import fmt_float


@dataclass(frozen=True)
class WeightingConfig:
    """Parameters of the rare-pair weighting function."""

    x_max: float = 100.0
    alpha: float = 0.75

    def __post_init__(self):
        if self.x_max <= 0:
            raise ValueError("x_max must be positive")
        if not 0 < self.alpha <= 1:
            raise ValueError("alpha must be in (0, 1]")


@dataclass(frozen=True)
class TrainConfig:
    dim: int = 300
    iterations: int = 50
    eta: float = 0.05
    seed: int = 1
    threads: int = 1
    clip: float = 100.0  # clamp on the scalar gradient; <= 0 disables

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.eta <= 0:
            raise ValueError("eta must be positive")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


@dataclass
class GloveParams:
    """Word/context matrices, bias vectors, and AdaGrad accumulators."""

    W: np.ndarray
    C: np.ndarray
    b_w: np.ndarray
    b_c: np.ndarray
    acc_W: np.ndarray = field(repr=False)
    acc_C: np.ndarray = field(repr=False)
    acc_b_w: np.ndarray = field(repr=False)
    acc_b_c: np.ndarray = field(repr=False)

    @property
    def vocab_size(self) -> int:
        return self.W.shape[0]

    @property
    def dim(self) -> int:
        return self.W.shape[1]

    def arrays(self) -> tuple[np.ndarray, ...]:
        return (self.W, self.C, self.b_w, self.b_c,
                self.acc_W, self.acc_C, self.acc_b_w, self.acc_b_c)

    def finite(self) -> bool:
        return all(np.isfinite(a).all() for a in self.arrays())


def init_params(vocab_size: int, dim: int, seed: int) -> GloveParams:
    """Seeded uniform init in (-0.5/dim, 0.5/dim) for W, C, b_w, b_c."""
    rng = np.random.default_rng(seed)
    bound = 0.5 / dim
    shape = (vocab_size, dim)
    return GloveParams(
        W=rng.uniform(-bound, bound, shape),
        C=rng.uniform(-bound, bound, shape),
        b_w=rng.uniform(-bound, bound, vocab_size),
        b_c=rng.uniform(-bound, bound, vocab_size),
        acc_W=np.ones(shape),
        acc_C=np.ones(shape),
        acc_b_w=np.ones(vocab_size),
        acc_b_c=np.ones(vocab_size),
    )


def weight_f(x: float, cfg: WeightingConfig) -> float:
    """Rare-pair down-weighting: (x/x_max)^alpha below x_max, 1 otherwise."""
    if x <= 0:
        raise ValueError("f is defined for positive counts only")
    if x < cfg.x_max:
        return (x / cfg.x_max) ** cfg.alpha
    return 1.0


def _weights(x: np.ndarray, cfg: WeightingConfig) -> np.ndarray:
    return np.where(x < cfg.x_max, (x / cfg.x_max) ** cfg.alpha, 1.0)


def _residual(params: GloveParams, i: int, j: int, count: float) -> float:
    return float(params.W[i] @ params.C[j]
                 + params.b_w[i] + params.b_c[j] - math.log(count))


def local_cost(params: GloveParams, i: int, j: int, count: float,
               cfg: WeightingConfig) -> float:
    if count <= 0:
        raise ValueError("cost is defined for observed (positive) counts only")
    r = _residual(params, i, j, count)
    return weight_f(count, cfg) * r * r


def local_gradients(params: GloveParams, i: int, j: int, count: float,
                    cfg: WeightingConfig):
    """Analytic gradients of local_cost for (W_i, C_j, b_w[i], b_c[j])."""
    if count <= 0:
        raise ValueError("gradients are defined for positive counts only")
    g = 2.0 * weight_f(count, cfg) * _residual(params, i, j, count)
    return g * params.C[j], g * params.W[i], g, g


@njit(cache=True, nogil=True)
def _epoch_seq(row, col, logx, fx, order, W, C, bw, bc,
               aw, ac, abw, abc, eta, clip):
    d = W.shape[1]
    for t in range(order.size):
        idx = order[t]
        i = row[idx]
        j = col[idx]
        dot = 0.0
        for q in range(d):
            dot += W[i, q] * C[j, q]
        r = dot + bw[i] + bc[j] - logx[idx]
        g = 2.0 * fx[idx] * r
        if not np.isfinite(g):
            return idx
        if clip > 0.0:
            if g > clip:
                g = clip
            elif g < -clip:
                g = -clip
        for q in range(d):
            gw = g * C[j, q]
            gc = g * W[i, q]
            W[i, q] -= eta * gw / np.sqrt(aw[i, q])
            C[j, q] -= eta * gc / np.sqrt(ac[j, q])
            aw[i, q] += gw * gw
            ac[j, q] += gc * gc
        bw[i] -= eta * g / np.sqrt(abw[i])
        bc[j] -= eta * g / np.sqrt(abc[j])
        abw[i] += g * g
        abc[j] += g * g
    return -1


@njit(cache=True, nogil=True, parallel=True)
def _epoch_par(row, col, logx, fx, order, W, C, bw, bc,
               aw, ac, abw, abc, eta, clip, bad):
    # Hogwild-style: unsynchronized writes, results depend on scheduling.
    d = W.shape[1]
    for t in prange(order.size):
        idx = order[t]
        i = row[idx]
        j = col[idx]
        dot = 0.0
        for q in range(d):
            dot += W[i, q] * C[j, q]
        r = dot + bw[i] + bc[j] - logx[idx]
        g = 2.0 * fx[idx] * r
        if not np.isfinite(g):
            bad[0] = idx
        else:
            if clip > 0.0:
                if g > clip:
                    g = clip
                elif g < -clip:
                    g = -clip
            for q in range(d):
                gw = g * C[j, q]
                gc = g * W[i, q]
                W[i, q] -= eta * gw / np.sqrt(aw[i, q])
                C[j, q] -= eta * gc / np.sqrt(ac[j, q])
                aw[i, q] += gw * gw
                ac[j, q] += gc * gc
            bw[i] -= eta * g / np.sqrt(abw[i])
            bc[j] -= eta * g / np.sqrt(abc[j])
            abw[i] += g * g
            abc[j] += g * g


@njit(cache=True, nogil=True)
def _total_cost(row, col, logx, fx, W, C, bw, bc):
    d = W.shape[1]
    total = 0.0
    for idx in range(row.size):
        i = row[idx]
        j = col[idx]
        dot = 0.0
        for q in range(d):
            dot += W[i, q] * C[j, q]
        r = dot + bw[i] + bc[j] - logx[idx]
        total += fx[idx] * r * r
    return total


def total_cost(table: CoocTable, params: GloveParams,
               cfg: WeightingConfig) -> float:
    """Sum of local costs over all observed cells (sequential, deterministic)."""
    logx = np.log(table.weight)
    fx = _weights(table.weight, cfg)
    return float(_total_cost(table.row, table.col, logx, fx,
                             params.W, params.C, params.b_w, params.b_c))


def train(table: CoocTable, tcfg: TrainConfig, wcfg: WeightingConfig,
          on_iteration: Optional[Callable[[int, GloveParams], None]] = None,
          ) -> GloveParams:
    """AdaGrad SGD over all cells, shuffled each epoch with the seeded RNG.

    on_iteration(epoch, params) runs on the training thread after every
    epoch; the parameter arrays are write-protected for the duration of the
    call. With threads=1 the run is bit-reproducible for a fixed seed;
    threads>1 opts into racy Hogwild updates.
    """
    if table.nnz == 0:
        raise ValueError("cannot train on an empty table")
    rng = np.random.default_rng(tcfg.seed)
    params = _init_from_rng(table.vocab_size, tcfg.dim, rng)
    logx = np.log(table.weight)
    fx = _weights(table.weight, wcfg)
    threads = min(tcfg.threads, numba.config.NUMBA_NUM_THREADS)
    if threads > 1:
        numba.set_num_threads(threads)
    bad = np.full(1, -1, dtype=np.int64)
    for epoch in range(1, tcfg.iterations + 1):
        order = rng.permutation(table.nnz)
        if threads > 1:
            bad[0] = -1
            _epoch_par(table.row, table.col, logx, fx, order,
                       *params.arrays(), tcfg.eta, tcfg.clip, bad)
            bad_idx = int(bad[0])
        else:
            bad_idx = int(_epoch_seq(table.row, table.col, logx, fx, order,
                                     *params.arrays(), tcfg.eta, tcfg.clip))
        if bad_idx >= 0:
            raise TrainingDivergedError(
                epoch, int(table.row[bad_idx]), int(table.col[bad_idx]))
        if on_iteration is not None:
            _with_readonly(params, on_iteration, epoch)
    if not params.finite():
        raise TrainingDivergedError(tcfg.iterations, -1, -1)
    return params


def _init_from_rng(vocab_size: int, dim: int, rng) -> GloveParams:
    bound = 0.5 / dim
    shape = (vocab_size, dim)
    return GloveParams(
        W=rng.uniform(-bound, bound, shape),
        C=rng.uniform(-bound, bound, shape),
        b_w=rng.uniform(-bound, bound, vocab_size),
        b_c=rng.uniform(-bound, bound, vocab_size),
        acc_W=np.ones(shape),
        acc_C=np.ones(shape),
        acc_b_w=np.ones(vocab_size),
        acc_b_c=np.ones(vocab_size),
    )


def _with_readonly(params: GloveParams, cb, epoch: int) -> None:
    for a in params.arrays():
        a.flags.writeable = False
    try:
        cb(epoch, params)
    finally:
        for a in params.arrays():
            a.flags.writeable = True


def save_embeddings(params: GloveParams, vocab: Vocabulary, path: str | Path,
                    matrix: str = "word") -> None:
    """`token v1 ... vd` per line in id order; floats round-trip exactly."""
    _check_vocab(params, vocab)
    M = params.W if matrix == "word" else params.C
    with open(path, "w", encoding="utf-8") as fh:
        for i, (tok, _) in enumerate(vocab.entries):
            fh.write(tok + " " + " ".join(fmt_float(v) for v in M[i]) + "\n")


def save_biases(params: GloveParams, vocab: Vocabulary, path: str | Path,
                which: str = "word") -> None:
    """`token bias` per line in id order; the input format for analysis."""
    _check_vocab(params, vocab)
    b = params.b_w if which == "word" else params.b_c
    with open(path, "w", encoding="utf-8") as fh:
        for i, (tok, _) in enumerate(vocab.entries):
            fh.write(f"{tok} {fmt_float(b[i])}\n")


def load_embeddings(path: str | Path) -> tuple[list[str], np.ndarray]:
    tokens: list[str] = []
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            parts = line.rstrip("\n").split(" ")
            tokens.append(parts[0])
            rows.append([float(v) for v in parts[1:]])
    return tokens, np.asarray(rows, dtype=np.float64)


def load_biases(path: str | Path) -> tuple[list[str], np.ndarray]:
    tokens: list[str] = []
    values = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            tok, val = line.rstrip("\n").split(" ")
            tokens.append(tok)
            values.append(float(val))
    return tokens, np.asarray(values, dtype=np.float64)


def _check_vocab(params: GloveParams, vocab: Vocabulary) -> None:
    if params.vocab_size != len(vocab):
        raise ValueError(
            f"params cover {params.vocab_size} ids, vocabulary has {len(vocab)}")
