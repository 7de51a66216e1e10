#!/usr/bin/env python3
"""Write the synthetic memorization corpus and a trained baseline model.

Produces train.jsonl (plus an optional long-method slice) and model.json in
the output directory, ready for `loggen run / eval / ablate`.
"""

import argparse
from pathlib import Path

from loggen.baseline import save_model, train
from loggen.corpus import write_dataset
from loggen.synth import toy_samples


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="toy", help="output directory")
    parser.add_argument("--count", type=int, default=50)
    parser.add_argument("--long-count", type=int, default=10,
                        help="additional methods stretched past 512 tokens")
    args = parser.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    samples = toy_samples(args.count)
    if args.long_count:
        samples += toy_samples(args.long_count, start=1000, filler=80)
    write_dataset(samples, out / "train.jsonl")
    save_model(train(samples), out / "model.json")
    print(f"wrote {len(samples)} samples to {out / 'train.jsonl'}")
    print(f"wrote baseline model to {out / 'model.json'}")


if __name__ == "__main__":
    main()
