#!/usr/bin/env python3
"""Sanity experiment: train the baseline on the toy corpus and evaluate on
the same corpus.  Every aspect must come out at 100% — if it does not, a
pipeline stage is mangling indices or statement text somewhere."""

import argparse
import json

from loggen.baseline import BaselineBackend, train
from loggen.chunking import SplitConfig
from loggen.evalkit import evaluate
from loggen.synth import toy_samples


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=50)
    parser.add_argument("--filler", type=int, default=0,
                        help="pad statements per method (80 forces chunked scoring)")
    parser.add_argument("--report", help="write the full eval report here")
    args = parser.parse_args()

    corpus = toy_samples(args.count, filler=args.filler)
    backend = BaselineBackend(train(corpus))
    payload = evaluate(corpus, backend, SplitConfig()).to_json()
    if args.report:
        with open(args.report, "w", encoding="utf-8") as handle:
            json.dump(payload, handle, indent=2)
    accuracy = payload["accuracy"]
    timing = payload["timing"]
    print(f"samples:   {payload['counts']['evaluated']}")
    print(
        "accuracy:  position {position:.1f}%  level {level:.1f}%  "
        "message {message:.1f}%  all3 {all3:.1f}%".format(**accuracy)
    )
    print(
        "timing:    {total_seconds:.5f}s/sample "
        "(stage1 {stage1_seconds:.5f}s, stage2 {stage2_seconds:.5f}s)".format(**timing)
    )
    failed = {k: v for k, v in accuracy.items() if v != 100.0}
    print("memorization:", "OK" if not failed else f"BROKEN {failed}")


if __name__ == "__main__":
    main()
