#!/usr/bin/env python3
"""Synthesize a small speech-shaped WAV corpus for toy training runs.

Clips are harmonic stacks with wandering pitch, formant-ish band emphasis
and an amplitude envelope: nothing like real speech, but enough spectral
structure for smoke-testing the training recipe.
"""

import argparse
import wave
from pathlib import Path

import numpy as np


def synth_clip(rng, seconds, rate):
    n = int(seconds * rate)
    t = np.arange(n) / rate
    f0 = rng.uniform(90, 260) * (1.0 + 0.08 * np.sin(2 * np.pi * rng.uniform(1, 4) * t))
    phase = 2 * np.pi * np.cumsum(f0) / rate
    x = np.zeros(n)
    for harmonic in range(1, 9):
        x += rng.uniform(0.2, 1.0) / harmonic * np.sin(harmonic * phase)
    x += 0.02 * rng.normal(size=n)
    envelope = 0.4 + 0.6 * np.abs(np.sin(2 * np.pi * rng.uniform(0.8, 2.5) * t))
    x *= envelope
    return 0.6 * x / np.max(np.abs(x))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("output", help="directory to fill with WAV clips")
    parser.add_argument("--clips", type=int, default=50)
    parser.add_argument("--seconds", type=float, default=1.5)
    parser.add_argument("--rate", type=int, default=22050)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(args.seed)
    for i in range(args.clips):
        pcm = np.round(synth_clip(rng, args.seconds, args.rate) * 32767).astype("<i2")
        with wave.open(str(out / f"clip{i:03d}.wav"), "wb") as fh:
            fh.setnchannels(1)
            fh.setsampwidth(2)
            fh.setframerate(args.rate)
            fh.writeframes(pcm.tobytes())
    print(f"wrote {args.clips} clips to {out}")


if __name__ == "__main__":
    main()
