#!/usr/bin/env python3
"""Generate a synthetic topical corpus for desk-scale experiments.

The build environment has no public corpus on hand, so experiments run on
seeded synthetic text with Zipf unigrams and topic structure. Any plain
UTF-8 text corpus works in its place.
"""

import argparse

from covec.synth import generate_corpus


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out", help="output text file")
    parser.add_argument("--tokens", type=int, default=10_000_000)
    parser.add_argument("--types", type=int, default=20_000)
    parser.add_argument("--topics", type=int, default=400)
    parser.add_argument("--doc-len", type=int, default=200)
    parser.add_argument("--zipf", type=float, default=1.0)
    parser.add_argument("--boost", type=float, default=60.0,
                        help="in-topic word weight multiplier")
    parser.add_argument("--seed", type=int, default=202)
    args = parser.parse_args()
    n = generate_corpus(args.out, n_tokens=args.tokens, n_types=args.types,
                        n_topics=args.topics, doc_len=args.doc_len,
                        zipf_exponent=args.zipf, topic_boost=args.boost,
                        seed=args.seed)
    print(f"wrote {n} tokens to {args.out}")


if __name__ == "__main__":
    main()
