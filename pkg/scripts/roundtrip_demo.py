#!/usr/bin/env python3
"""Encode and decode a synthetic tone end to end and report the metrics.

With random weights the reconstruction is meaningless noise; the point is
to show the full pipeline (audio -> codes -> bitstream -> audio -> metrics)
with a single command and no external files.
"""

import argparse

import numpy as np

from lfsc import (
    AudioBuffer,
    ModelWeights,
    decode,
    encode,
    evaluate,
    pack,
    reduced_config,
    unpack,
)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--model", help="weight file; random reduced model when omitted")
    parser.add_argument("--seconds", type=float, default=1.0)
    parser.add_argument("--freq", type=float, default=440.0)
    args = parser.parse_args()

    weights = ModelWeights.load(args.model) if args.model else ModelWeights.random(reduced_config(), seed=0)
    rate = weights.config.sample_rate
    t = np.arange(int(args.seconds * rate)) / rate
    audio = AudioBuffer(0.5 * np.sin(2 * np.pi * args.freq * t), rate)

    codes = encode(audio, weights)
    stream = pack(codes, rate, weights.config.total_stride, len(audio))
    header, decoded_codes = unpack(stream)
    out = decode(decoded_codes, weights, original_length=header.original_length)

    print(f"input:   {len(audio)} samples at {rate} Hz")
    print(f"codes:   {codes.codes.shape[0]} frames x {codes.codes.shape[1]} codebooks")
    print(f"stream:  {len(stream)} bytes ({len(stream) * 8 / audio.duration / 1000:.3f} kbps incl. header)")
    print(f"output:  {len(out)} samples")
    report = evaluate(audio, out)
    print(f"metrics: si_sdr={report.si_sdr:.2f} dB  mel={report.mel_dist:.4f}  "
          f"stft={report.stft_dist:.4f}  bandwidth={report.bandwidth:.0f} Hz")


if __name__ == "__main__":
    main()
