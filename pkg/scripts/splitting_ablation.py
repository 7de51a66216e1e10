#!/usr/bin/env python3
"""Splitting-strategy ablation on a corpus mixing short and long methods.

Targets in the long methods sit past the 512-token cutoff, so the
truncate-discard policy cannot see them while the even-split policies can;
the short slice is one merged column since splitting never triggers there.
"""

import argparse

from loggen.baseline import BaselineBackend, train
from loggen.chunking import SplitConfig
from loggen.evalkit import ablate
from loggen.synth import toy_samples

POLICIES = [
    "truncate-discard",
    "truncate-split",
    "average-split-512",
    "average-split-300",
    "average-split-300-statement-1",
    "average-split-300-statement-5",
    "average-split-300-statement-10",
]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--short-count", type=int, default=40)
    parser.add_argument("--long-count", type=int, default=10)
    args = parser.parse_args()

    corpus = toy_samples(args.short_count) + toy_samples(
        args.long_count, start=1000, filler=80
    )
    backend = BaselineBackend(train(corpus))
    table = ablate(corpus, backend, SplitConfig(), POLICIES)
    labels = table["bucket_labels"]
    print(f"{'policy':36s}" + "".join(f"{label + ' acc':>14s}" for label in labels))
    for row in table["policies"]:
        cells = "".join(
            f"{row['buckets'][label]['accuracy']:13.2f}%" for label in labels
        )
        print(f"{row['policy']:36s}{cells}")


if __name__ == "__main__":
    main()
