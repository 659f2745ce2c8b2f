"""Subcommand CLI chaining the pipeline: corpus -> counts -> training -> analysis.

Exit codes: 0 success, 1 usage error, 2 data error (missing/malformed input,
failed precondition, diverged training). Every subcommand writes a
manifest.json with the resolved flags, seed, input hashes, and tool version
next to its outputs; with --threads 1 a rerun from the manifest reproduces
the outputs bit-exactly.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, analysis, cooccur, corpus, glove, sgns
from . import pmi as pmi_mod
from .ioutil import sha256_file


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclasses.dataclass
class RunManifest:
    command: str
    version: str
    seed: int | None
    threads: int
    flags: dict
    inputs: list[dict]

    @classmethod
    def from_args(cls, args: argparse.Namespace, inputs) -> "RunManifest":
        flags = {k: v for k, v in vars(args).items()
                 if k not in ("func", "command")}
        return cls(
            command=args.command,
            version=__version__,
            seed=getattr(args, "seed", None),
            threads=getattr(args, "threads", 1),
            flags=flags,
            inputs=[{"path": str(p), "sha256": sha256_file(p)} for p in inputs],
        )

    def write(self, out_dir: Path) -> None:
        payload = json.dumps(dataclasses.asdict(self), indent=2,
                             sort_keys=True, default=str)
        (out_dir / "manifest.json").write_text(payload + "\n", encoding="utf-8")


def build_parser() -> _Parser:
    parser = _Parser(prog="covec", description=__doc__)
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("vocab", help="build a min-count filtered vocabulary")
    p.add_argument("corpus", nargs="+", help="UTF-8 text files, concatenated")
    p.add_argument("--min-count", type=int, default=100)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_vocab)

    p = sub.add_parser("count", help="count windowed co-occurrences")
    p.add_argument("corpus", nargs="+")
    p.add_argument("--vocab", required=True)
    p.add_argument("--window", type=int, default=10)
    p.add_argument("--no-distance-weighting", action="store_true",
                   help="add 1 per pair instead of 1/d")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("train-glove", help="train GloVe on a co-occurrence table")
    p.add_argument("--cooccur", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--dim", type=int, default=300)
    p.add_argument("--iters", type=int, default=50)
    p.add_argument("--eta", type=float, default=0.05)
    p.add_argument("--x-max", type=float, default=100.0)
    p.add_argument("--alpha", type=float, default=0.75)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train_glove)

    p = sub.add_parser("train-sgns", help="train SGNS (matrix or stream mode)")
    p.add_argument("--mode", choices=["matrix", "stream"], default="matrix")
    p.add_argument("--cooccur", help="co-occurrence table (matrix mode)")
    p.add_argument("corpus", nargs="*", help="text files (stream mode)")
    p.add_argument("--vocab", required=True)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--dim", type=int, default=300)
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--eta", type=float, default=0.05)
    p.add_argument("--smoothing", type=float, default=1.0)
    p.add_argument("--window", type=int, default=10)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train_sgns)

    p = sub.add_parser("pmi", help="export the shifted-PMI matrix as CSV")
    p.add_argument("--cooccur", required=True)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_pmi)

    p = sub.add_parser("analyze", help="correlate saved biases with log counts")
    p.add_argument("--cooccur", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--biases-word", required=True)
    p.add_argument("--biases-context", required=True)
    p.add_argument("--iteration", type=int, default=1,
                   help="iteration stamp for the trace record")
    p.add_argument("--pair-sample", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("experiment",
                       help="full bias-convergence experiment, one run per x_max")
    p.add_argument("corpus", nargs="+")
    p.add_argument("--min-count", type=int, default=100)
    p.add_argument("--window", type=int, default=10)
    p.add_argument("--x-max", type=float, action="append",
                   help="repeatable; default 100")
    p.add_argument("--alpha", type=float, default=0.75)
    p.add_argument("--dim", type=int, default=300)
    p.add_argument("--iters", type=int, default=50)
    p.add_argument("--eta", type=float, default=0.05)
    p.add_argument("--pair-sample", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_experiment)

    return parser


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_vocab(args) -> int:
    out = _outdir(args)
    vocab = corpus.build_vocab_from_files(args.corpus, args.min_count,
                                          workers=args.threads)
    corpus.save_vocab(vocab, out / "vocab.txt")
    RunManifest.from_args(args, args.corpus).write(out)
    print(f"vocab: {len(vocab)} tokens -> {out / 'vocab.txt'}")
    return 0


def cmd_count(args) -> int:
    out = _outdir(args)
    vocab = corpus.load_vocab(args.vocab)
    stream = corpus.encode_files(args.corpus, vocab)
    table = cooccur.count(stream, args.window,
                          distance_weighting=not args.no_distance_weighting,
                          threads=args.threads)
    cooccur.save(table, out / "cooccur.bin")
    RunManifest.from_args(args, list(args.corpus) + [args.vocab]).write(out)
    print(f"count: {table.nnz} cells, total {table.total:.1f} "
          f"-> {out / 'cooccur.bin'}")
    return 0


def _load_table(args, vocab) -> cooccur.CoocTable:
    return cooccur.load(args.cooccur, vocab_size=len(vocab))


def cmd_train_glove(args) -> int:
    out = _outdir(args)
    vocab = corpus.load_vocab(args.vocab)
    table = _load_table(args, vocab)
    tcfg = glove.TrainConfig(dim=args.dim, iterations=args.iters, eta=args.eta,
                             seed=args.seed, threads=args.threads)
    wcfg = glove.WeightingConfig(x_max=args.x_max, alpha=args.alpha)
    params = glove.train(table, tcfg, wcfg)
    glove.save_embeddings(params, vocab, out / "vectors.txt", matrix="word")
    glove.save_embeddings(params, vocab, out / "context_vectors.txt",
                          matrix="context")
    glove.save_biases(params, vocab, out / "biases_word.txt", which="word")
    glove.save_biases(params, vocab, out / "biases_context.txt", which="context")
    RunManifest.from_args(args, [args.cooccur, args.vocab]).write(out)
    print(f"train-glove: final cost {glove.total_cost(table, params, wcfg):.6g}")
    return 0


def cmd_train_sgns(args) -> int:
    out = _outdir(args)
    vocab = corpus.load_vocab(args.vocab)
    cfg = sgns.SgnsConfig(k=args.k, dim=args.dim, eta=args.eta,
                          epochs=args.epochs, seed=args.seed,
                          smoothing=args.smoothing, threads=args.threads)
    if args.mode == "matrix":
        if not args.cooccur:
            raise UsageError("matrix mode needs --cooccur")
        table = _load_table(args, vocab)
        params = sgns.train_matrix(table, cfg)
        inputs = [args.cooccur, args.vocab]
    else:
        if not args.corpus:
            raise UsageError("stream mode needs corpus files")
        stream = corpus.encode_files(args.corpus, vocab)
        params = sgns.train_stream(stream, vocab, args.window, cfg)
        inputs = list(args.corpus) + [args.vocab]
    _save_sgns(params, vocab, out)
    RunManifest.from_args(args, inputs).write(out)
    print(f"train-sgns ({args.mode}): wrote {out / 'vectors.txt'}")
    return 0


def _save_sgns(params: sgns.SgnsParams, vocab, out: Path) -> None:
    from .ioutil import fmt_float
    for name, M in (("vectors.txt", params.W), ("context_vectors.txt", params.C)):
        with open(out / name, "w", encoding="utf-8") as fh:
            for i, (tok, _) in enumerate(vocab.entries):
                fh.write(tok + " " + " ".join(fmt_float(v) for v in M[i]) + "\n")


def cmd_pmi(args) -> int:
    out = _outdir(args)
    table = cooccur.load(args.cooccur)
    matrix = pmi_mod.shifted_pmi_matrix(table, args.k)
    pmi_mod.export_pmi_csv(matrix, out / "pmi.csv")
    RunManifest.from_args(args, [args.cooccur]).write(out)
    print(f"pmi: {matrix.nnz} cells, shift log({args.k}) -> {out / 'pmi.csv'}")
    return 0


def _params_from_bias_files(vocab, word_path, context_path) -> glove.GloveParams:
    tokens_w, b_w = glove.load_biases(word_path)
    tokens_c, b_c = glove.load_biases(context_path)
    if tokens_w != vocab.tokens or tokens_c != vocab.tokens:
        raise ValueError("bias files do not match the vocabulary")
    n = len(vocab)
    return glove.GloveParams(
        W=np.zeros((n, 1)), C=np.zeros((n, 1)), b_w=b_w, b_c=b_c,
        acc_W=np.ones((n, 1)), acc_C=np.ones((n, 1)),
        acc_b_w=np.ones(n), acc_b_c=np.ones(n))


def cmd_analyze(args) -> int:
    out = _outdir(args)
    vocab = corpus.load_vocab(args.vocab)
    table = _load_table(args, vocab)
    params = _params_from_bias_files(vocab, args.biases_word, args.biases_context)
    record = analysis.correlate_biases(params, table, iteration=args.iteration,
                                       pair_sample=args.pair_sample,
                                       seed=args.seed)
    trace = analysis.BiasTrace()
    trace.append(record)
    analysis.export_trace(trace, out / "trace.csv")
    analysis.export_scatter(params, vocab, table, out / "scatter.csv")
    RunManifest.from_args(args, [args.cooccur, args.vocab, args.biases_word,
                                 args.biases_context]).write(out)
    print(f"analyze: r_word={record.r_word:.4f} r_context={record.r_context:.4f} "
          f"r_sum={record.r_sum:.4f}")
    return 0


def cmd_experiment(args) -> int:
    out = _outdir(args)
    x_maxes = args.x_max if args.x_max else [100.0]
    vocab = corpus.build_vocab_from_files(args.corpus, args.min_count,
                                          workers=args.threads)
    if len(vocab) == 0:
        raise ValueError("vocabulary is empty; lower --min-count")
    corpus.save_vocab(vocab, out / "vocab.txt")
    stream = corpus.encode_files(args.corpus, vocab)
    table = cooccur.count(stream, args.window, distance_weighting=True,
                          threads=args.threads)
    cooccur.save(table, out / "cooccur.bin")

    for x_max in x_maxes:
        tag = f"{x_max:g}"
        wcfg = glove.WeightingConfig(x_max=x_max, alpha=args.alpha)
        tcfg = glove.TrainConfig(dim=args.dim, iterations=args.iters,
                                 eta=args.eta, seed=args.seed,
                                 threads=args.threads)
        trace = analysis.BiasTrace()

        def snapshot(epoch: int, params: glove.GloveParams) -> None:
            trace.append(analysis.correlate_biases(
                params, table, iteration=epoch, pair_sample=args.pair_sample,
                seed=args.seed))
            if epoch == 1 or epoch == tcfg.iterations:
                analysis.export_scatter(
                    params, vocab, table,
                    out / f"scatter_xmax{tag}_iter{epoch}.csv")

        params = glove.train(table, tcfg, wcfg, on_iteration=snapshot)
        analysis.export_trace(trace, out / f"trace_xmax{tag}.csv")
        glove.save_embeddings(params, vocab, out / f"vectors_xmax{tag}.txt")
        glove.save_biases(params, vocab, out / f"biases_word_xmax{tag}.txt",
                          which="word")
        glove.save_biases(params, vocab, out / f"biases_context_xmax{tag}.txt",
                          which="context")
        last = trace.records[-1]
        print(f"experiment x_max={tag}: r_word {trace.records[0].r_word:.3f} "
              f"-> {last.r_word:.3f} over {len(trace)} iterations")

    RunManifest.from_args(args, args.corpus).write(out)
    return 0


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    if getattr(args, "func", None) is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, KeyError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))
