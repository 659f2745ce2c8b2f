"""Pointwise mutual information over observed cells, and factorization residuals.

PMI is computed only where #(w,c) > 0. Unobserved cells are an error by
contract, never 0 or -inf: the trainers ignore those cells, so reporting a
value for them would be meaningless. `total` is the grand sum of pair
counts, not the token count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cooccur import CoocTable
from .errors import UnobservedPairError, ZeroMarginalError
from .glove import GloveParams
from .ioutil import fmt_float
from .sgns import SgnsParams


@dataclass(frozen=True)
class PmiMatrix:
    """Sparse PMI values over observed pairs; `shift` records the log k applied."""

    vocab_size: int
    row: np.ndarray
    col: np.ndarray
    value: np.ndarray
    shift: float

    @property
    def nnz(self) -> int:
        return int(self.row.size)

    def get(self, i: int, j: int) -> float:
        keys = (self.row.astype(np.int64) << 32) | self.col.astype(np.int64)
        key = (np.int64(i) << np.int64(32)) | np.int64(j)
        pos = int(np.searchsorted(keys, key))
        if pos >= keys.size or keys[pos] != key:
            raise UnobservedPairError((i, j))
        return float(self.value[pos])


def pmi(table: CoocTable, i: int, j: int) -> float:
    """log #(w,c) - log #(w) - log #(c) + log total, for an observed cell."""
    if not table.has(i, j):
        raise UnobservedPairError((i, j))
    n_w = table.word_marginals[i]
    n_c = table.context_marginals[j]
    if n_w <= 0 or n_c <= 0 or table.total <= 0:
        raise ZeroMarginalError(f"zero marginal for pair ({i}, {j})")
    return (math.log(table.get(i, j)) - math.log(n_w) - math.log(n_c)
            + math.log(table.total))


def shifted_pmi_matrix(table: CoocTable, k: int) -> PmiMatrix:
    """PMI - log k on every observed cell."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if table.nnz == 0:
        return PmiMatrix(table.vocab_size, table.row, table.col,
                         np.empty(0), math.log(k))
    n_w = table.word_marginals[table.row]
    n_c = table.context_marginals[table.col]
    if (n_w <= 0).any() or (n_c <= 0).any() or table.total <= 0:
        raise ZeroMarginalError("zero marginal among observed cells")
    values = (np.log(table.weight) - np.log(n_w) - np.log(n_c)
              + math.log(table.total) - math.log(k))
    return PmiMatrix(table.vocab_size, table.row, table.col, values,
                     math.log(k))


@dataclass(frozen=True)
class ResidualReport:
    max_abs: float
    mean_abs: float
    cells: int


def _row_dots(W: np.ndarray, C: np.ndarray, row: np.ndarray, col: np.ndarray,
              chunk: int = 1 << 18) -> np.ndarray:
    out = np.empty(row.size)
    for s in range(0, row.size, chunk):
        e = min(s + chunk, row.size)
        out[s:e] = np.einsum("ij,ij->i", W[row[s:e]], C[col[s:e]])
    return out


def residual_report(params, table: CoocTable, k: int) -> ResidualReport:
    """How far trained dot products sit from their closed-form targets.

    SGNS params are compared against shifted PMI; GloVe params (which carry
    biases) against log #(w,c) with the biases added to the dot product.
    """
    if params.vocab_size != table.vocab_size:
        raise ValueError(
            f"params cover {params.vocab_size} ids, table has {table.vocab_size}")
    dots = _row_dots(params.W, params.C, table.row, table.col)
    if isinstance(params, GloveParams):
        residual = (dots + params.b_w[table.row] + params.b_c[table.col]
                    - np.log(table.weight))
    elif isinstance(params, SgnsParams):
        residual = dots - shifted_pmi_matrix(table, k).value
    else:
        raise TypeError(f"unsupported params type {type(params)!r}")
    abs_r = np.abs(residual)
    return ResidualReport(max_abs=float(abs_r.max()),
                          mean_abs=float(abs_r.mean()),
                          cells=int(abs_r.size))


def export_pmi_csv(matrix: PmiMatrix, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("i,j,value\n")
        for i, j, v in zip(matrix.row, matrix.col, matrix.value):
            fh.write(f"{i},{j},{fmt_float(v)}\n")
