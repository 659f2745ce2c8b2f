import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from covec import cooccur
from covec.corpus import TokenStream
from covec.errors import UnobservedPairError, ZeroMarginalError
from covec.glove import GloveParams
from covec.pmi import (export_pmi_csv, pmi, residual_report,
                       shifted_pmi_matrix)
from covec.sgns import SgnsParams

from .conftest import dense_table


def uniform_table(n=2, value=1.0):
    rows, cols = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    return cooccur.CoocTable.from_triples(
        rows.ravel(), cols.ravel(), np.full(n * n, value), n)


def test_worked_example_is_log_two(worked_counts_table):
    assert pmi(worked_counts_table, 0, 0) == \
        pytest.approx(math.log(2.0), rel=1e-14)


def test_independent_cell_is_zero():
    assert pmi(uniform_table(), 0, 1) == pytest.approx(0.0, abs=1e-15)


def test_uniform_table_is_zero_everywhere():
    table = uniform_table(2, value=3.5)
    for i in range(2):
        for j in range(2):
            assert pmi(table, i, j) == pytest.approx(0.0, abs=1e-15)


def test_unobserved_cell_raises_distinct_error(worked_counts_table):
    with pytest.raises(UnobservedPairError):
        pmi(worked_counts_table, 1, 1)


def test_zero_marginal_raises_distinct_error():
    table = cooccur.CoocTable.from_triples([0], [0], [0.0], 1)
    with pytest.raises(ZeroMarginalError):
        pmi(table, 0, 0)


def test_symmetric_table_gives_symmetric_pmi():
    stream = TokenStream(ids=np.array([0, 1, 2, 0, 1, 0, 2, 2, 1],
                                      dtype=np.int32), vocab_size=3)
    table = cooccur.count(stream, window=3)
    for i, j, _ in table.cells():
        assert pmi(table, i, j) == pytest.approx(pmi(table, j, i), rel=1e-12)


@given(lam=st.floats(0.01, 100.0))
@settings(max_examples=100)
def test_pmi_invariant_under_scaling(lam):
    t = cooccur.CoocTable.from_triples(
        row=[0, 0, 1, 2], col=[0, 1, 0, 2],
        weight=[4.0, 6.0, 16.0, 74.0], vocab_size=3)
    scaled = cooccur.CoocTable.from_triples(t.row, t.col, t.weight * lam,
                                            t.vocab_size)
    for i, j, _ in t.cells():
        assert pmi(scaled, i, j) == pytest.approx(pmi(t, i, j),
                                                  rel=1e-12, abs=1e-12)


class TestShiftedMatrix:
    def test_k1_equals_plain_pmi(self, worked_counts_table):
        m = shifted_pmi_matrix(worked_counts_table, k=1)
        for i, j, _ in worked_counts_table.cells():
            assert m.get(i, j) == pytest.approx(pmi(worked_counts_table, i, j),
                                                rel=1e-14)
        assert m.shift == 0.0

    def test_k5_shifts_log_two_cell(self, worked_counts_table):
        m = shifted_pmi_matrix(worked_counts_table, k=5)
        assert m.get(0, 0) == pytest.approx(math.log(0.4), abs=1e-12)

    def test_independent_table_is_constant_minus_log_k(self):
        m = shifted_pmi_matrix(uniform_table(3, 2.0), k=7)
        assert m.value == pytest.approx(-math.log(7.0), abs=1e-12)

    def test_rejects_bad_k(self, worked_counts_table):
        with pytest.raises(ValueError):
            shifted_pmi_matrix(worked_counts_table, k=0)

    def test_unobserved_lookup_raises(self, worked_counts_table):
        m = shifted_pmi_matrix(worked_counts_table, k=1)
        with pytest.raises(UnobservedPairError):
            m.get(2, 0)


class TestResidualReport:
    def test_analytic_sgns_optimum_has_zero_residual(self):
        table = dense_table(4, seed=8, low=1.0, high=60.0)
        target = shifted_pmi_matrix(table, k=5)
        dense = np.zeros((4, 4))
        dense[target.row, target.col] = target.value
        params = SgnsParams(W=np.eye(4), C=dense.T.copy())
        rep = residual_report(params, table, k=5)
        assert rep.max_abs < 1e-9
        assert rep.cells == table.nnz

    def test_glove_params_satisfying_ideal_solution(self):
        table = dense_table(3, seed=9, low=1.0, high=40.0)
        logx = np.zeros((3, 3))
        logx[table.row, table.col] = np.log(table.weight)
        params = GloveParams(
            W=np.eye(3), C=logx.T.copy(),
            b_w=np.zeros(3), b_c=np.zeros(3),
            acc_W=np.ones((3, 3)), acc_C=np.ones((3, 3)),
            acc_b_w=np.ones(3), acc_b_c=np.ones(3))
        rep = residual_report(params, table, k=1)
        assert rep.max_abs == 0.0 and rep.mean_abs == 0.0

    def test_matches_brute_force_recomputation(self):
        table = dense_table(3, seed=10, low=0.5, high=20.0)
        rng = np.random.default_rng(4)
        params = SgnsParams(W=rng.normal(size=(3, 4)),
                            C=rng.normal(size=(3, 4)))
        rep = residual_report(params, table, k=2)
        resids = []
        for i, j, w in table.cells():
            target = pmi(table, i, j) - math.log(2.0)
            resids.append(abs(float(params.W[i] @ params.C[j]) - target))
        assert rep.max_abs == pytest.approx(max(resids), rel=1e-12)
        assert rep.mean_abs == pytest.approx(np.mean(resids), rel=1e-12)

    def test_vocab_mismatch_rejected(self):
        table = dense_table(3, seed=1)
        params = SgnsParams(W=np.zeros((2, 2)), C=np.zeros((2, 2)))
        with pytest.raises(ValueError):
            residual_report(params, table, k=1)


def test_csv_export(tmp_path, worked_counts_table):
    m = shifted_pmi_matrix(worked_counts_table, k=5)
    path = tmp_path / "pmi.csv"
    export_pmi_csv(m, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "i,j,value"
    assert len(lines) == 1 + worked_counts_table.nnz
    i, j, v = lines[1].split(",")
    assert (int(i), int(j)) == (0, 0)
    assert float(v) == m.get(0, 0)
