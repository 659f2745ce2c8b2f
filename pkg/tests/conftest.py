import numpy as np
import pytest

from covec import cooccur


@pytest.fixture
def aba_table():
    """Table for the corpus 'a b a' with window 2 and 1/d weighting."""
    from covec.corpus import TokenStream
    stream = TokenStream(ids=np.array([0, 1, 0], dtype=np.int32), vocab_size=2)
    return cooccur.count(stream, window=2, distance_weighting=True)


@pytest.fixture
def worked_counts_table():
    """Sparse table whose (0,0) cell realizes the worked PMI example:
    #(w0,c0)=4, #(w0)=10, #(c0)=20, total=100."""
    return cooccur.CoocTable.from_triples(
        row=[0, 0, 1, 2], col=[0, 1, 0, 2],
        weight=[4.0, 6.0, 16.0, 74.0], vocab_size=3)


def dense_table(n: int, seed: int, low: float = 0.5, high: float = 200.0):
    """Dense n x n synthetic counts spanning both weighting branches."""
    rng = np.random.default_rng(seed)
    counts = rng.uniform(low, high, (n, n))
    rows, cols = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    return cooccur.CoocTable.from_triples(
        rows.ravel(), cols.ravel(), counts.ravel(), n)
