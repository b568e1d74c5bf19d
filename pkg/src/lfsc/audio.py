"""Audio buffer type and mono 16-bit PCM WAV I/O."""

from __future__ import annotations

import wave
from dataclasses import dataclass

import numpy as np

from .errors import FormatError, UnsupportedLayoutError


@dataclass
class AudioBuffer:
    """Sample sequence with its rate; amplitudes nominally in [-1, 1]."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64)

    def __len__(self) -> int:
        return self.samples.shape[-1]

    @property
    def duration(self) -> float:
        return len(self) / self.sample_rate


def read_wav(path) -> AudioBuffer:
    """Read a mono 16-bit PCM WAV file."""
    try:
        with wave.open(str(path), "rb") as wav:
            channels = wav.getnchannels()
            sampwidth = wav.getsampwidth()
            rate = wav.getframerate()
            raw = wav.readframes(wav.getnframes())
    except (wave.Error, EOFError) as exc:
        raise FormatError(f"cannot read WAV file {path}: {exc}") from None
    if channels != 1:
        raise UnsupportedLayoutError(f"expected mono audio, file has {channels} channels")
    if sampwidth != 2:
        raise FormatError(f"expected 16-bit PCM, file has {8 * sampwidth}-bit samples")
    samples = np.frombuffer(raw, dtype="<i2").astype(np.float64) / 32768.0
    return AudioBuffer(samples=samples, sample_rate=rate)


def write_wav(path, audio: AudioBuffer) -> None:
    """Write a mono 16-bit PCM WAV file."""
    samples = np.asarray(audio.samples, dtype=np.float64)
    if samples.ndim != 1:
        raise UnsupportedLayoutError("only mono buffers can be written")
    pcm = np.round(np.clip(samples, -1.0, 1.0) * 32767.0).astype("<i2")
    with wave.open(str(path), "wb") as wav:
        wav.setnchannels(1)
        wav.setsampwidth(2)
        wav.setframerate(audio.sample_rate)
        wav.writeframes(pcm.tobytes())
