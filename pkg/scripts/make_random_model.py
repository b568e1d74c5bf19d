#!/usr/bin/env python3
"""Write a randomly initialized weight file, full-size or reduced.

Useful for exercising the encode/decode pipeline and the CLI before any
trained weights exist.
"""

import argparse

from lfsc import ModelConfig, ModelWeights, reduced_config


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("output", help="weight file to write (.lfsw)")
    parser.add_argument("--full", action="store_true", help="full-size channel widths")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    config = ModelConfig() if args.full else reduced_config()
    weights = ModelWeights.random(config, seed=args.seed)
    weights.save(args.output)
    enc, dec = weights.parameter_count()
    print(f"wrote {args.output}: encoder {enc:,} + decoder {dec:,} parameters")


if __name__ == "__main__":
    main()
