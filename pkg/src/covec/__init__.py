"""covec: GloVe and SGNS trainers over one co-occurrence pipeline.

The package exists to make one empirical question easy to ask: do GloVe's
free bias terms drift toward the log-count terms that sit fixed in the
SGNS optimum? `covec experiment` runs the whole pipeline and exports the
per-iteration correlation traces.
"""

__version__ = "0.1.0"

from .alias import AliasTable
from .analysis import BiasTrace, TraceRecord, correlate_biases, pearson_r
from .cooccur import CoocTable, count, load, merge, save
from .corpus import TokenStream, Vocabulary, build_vocab, encode, tokenize
from .glove import GloveParams, TrainConfig, WeightingConfig
from .pmi import PmiMatrix, residual_report, shifted_pmi_matrix
from .sgns import SgnsConfig, SgnsParams, sigmoid, solve_optimum

__all__ = [
    "AliasTable",
    "BiasTrace",
    "CoocTable",
    "GloveParams",
    "PmiMatrix",
    "SgnsConfig",
    "SgnsParams",
    "TokenStream",
    "TraceRecord",
    "TrainConfig",
    "Vocabulary",
    "WeightingConfig",
    "build_vocab",
    "correlate_biases",
    "count",
    "encode",
    "load",
    "merge",
    "pearson_r",
    "residual_report",
    "save",
    "shifted_pmi_matrix",
    "sigmoid",
    "solve_optimum",
    "tokenize",
]
