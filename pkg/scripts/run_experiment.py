#!/usr/bin/env python3
"""Run the full bias-convergence experiment end to end.

Generates the default synthetic corpus if the given path does not exist,
then chains vocab -> count -> train-glove (per x_max) with per-iteration
correlation tracking, and prints the trace summary. Expect ~30 minutes at
the default desk scale with two threads.
"""

import argparse
import sys
from pathlib import Path

from covec import analysis, cli
from covec.synth import generate_corpus


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--corpus", default="data/desk_corpus.txt")
    parser.add_argument("--tokens", type=int, default=10_000_000)
    parser.add_argument("--out", default="runs/experiment")
    parser.add_argument("--min-count", type=int, default=50)
    parser.add_argument("--window", type=int, default=10)
    parser.add_argument("--dim", type=int, default=100)
    parser.add_argument("--iters", type=int, default=50)
    parser.add_argument("--x-max", type=float, action="append")
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--threads", type=int, default=2)
    args = parser.parse_args()

    corpus = Path(args.corpus)
    if not corpus.exists():
        corpus.parent.mkdir(parents=True, exist_ok=True)
        print(f"generating {args.tokens} tokens at {corpus} ...")
        generate_corpus(corpus, n_tokens=args.tokens, seed=202)

    x_maxes = args.x_max or [10.0, 100.0]
    argv = ["experiment", str(corpus),
            "--min-count", str(args.min_count),
            "--window", str(args.window),
            "--alpha", "0.75",
            "--dim", str(args.dim),
            "--iters", str(args.iters),
            "--seed", str(args.seed),
            "--threads", str(args.threads),
            "--out", args.out]
    for xm in x_maxes:
        argv += ["--x-max", str(xm)]
    rc = cli.run(argv)
    if rc != 0:
        return rc

    for xm in x_maxes:
        trace = analysis.load_trace(Path(args.out) / f"trace_xmax{xm:g}.csv")
        first, last = trace.records[0], trace.records[-1]
        print(f"x_max={xm:g}: r_word {first.r_word:.3f} -> {last.r_word:.3f}, "
              f"r_context {last.r_context:.3f}, r_sum {last.r_sum:.3f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
