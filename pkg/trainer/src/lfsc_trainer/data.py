"""WAV corpus loading and deterministic excerpt batching."""

from __future__ import annotations

import math
import wave
from pathlib import Path

import numpy as np
import torch

from .errors import DataError


def read_wav(path) -> tuple[np.ndarray, int]:
    with wave.open(str(path), "rb") as fh:
        if fh.getnchannels() != 1:
            raise DataError(f"{path}: expected mono, got {fh.getnchannels()} channels")
        if fh.getsampwidth() != 2:
            raise DataError(f"{path}: expected 16-bit PCM")
        rate = fh.getframerate()
        raw = fh.readframes(fh.getnframes())
    samples = np.frombuffer(raw, dtype="<i2").astype(np.float32) / 32768.0
    return samples, rate


class Corpus:
    """In-memory clip store with seeded random excerpt sampling.

    Excerpts are cropped to the configured length and zero right-padded to
    a whole number of frames, mirroring what the runtime encoder does.
    """

    def __init__(self, directory, sample_rate: int, excerpt_samples: int, total_stride: int, seed: int = 0):
        paths = sorted(Path(directory).glob("*.wav"))
        if not paths:
            raise DataError(f"no .wav files under {directory}")
        self.clips: list[np.ndarray] = []
        for path in paths:
            samples, rate = read_wav(path)
            if rate != sample_rate:
                raise DataError(f"{path}: rate {rate} != expected {sample_rate}")
            if len(samples) < excerpt_samples:
                raise DataError(
                    f"{path}: {len(samples)} samples is shorter than one "
                    f"{excerpt_samples}-sample excerpt"
                )
            self.clips.append(samples)
        self.excerpt_samples = excerpt_samples
        self.padded = math.ceil(excerpt_samples / total_stride) * total_stride
        self.rng = np.random.default_rng(seed)

    def __len__(self) -> int:
        return len(self.clips)

    def batch(self, size: int) -> torch.Tensor:
        out = np.zeros((size, self.padded), dtype=np.float32)
        for row in range(size):
            clip = self.clips[int(self.rng.integers(len(self.clips)))]
            start = int(self.rng.integers(len(clip) - self.excerpt_samples + 1))
            out[row, : self.excerpt_samples] = clip[start : start + self.excerpt_samples]
        return torch.from_numpy(out)
