"""Compressed bitstream container and rate accounting.

Layout: a little-endian header (magic "LFSC") followed by the code payload.
Codes are written frame by frame, codebook 0..N-1 within a frame, each as a
fixed-width big-endian bit field of ``code_bit_width`` bits, packed
contiguously MSB-first with the final byte zero-padded.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import (
    CorruptionError,
    FormatError,
    InvalidCodeError,
    InvalidInputError,
    TruncationError,
)
from .fsq import CodeSequence, FsqSpec

MAGIC = b"LFSC"
VERSION = 1
FILE_EXTENSION = ".lfsc"


@dataclass(frozen=True)
class BitstreamHeader:
    sample_rate: int
    total_stride: int
    num_codebooks: int
    levels: tuple[int, ...]
    num_frames: int
    original_length: int
    version: int = VERSION

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(int(L) for L in self.levels))
        if self.num_frames > 0:
            low = (self.num_frames - 1) * self.total_stride
            high = self.num_frames * self.total_stride
            if not low < self.original_length <= high:
                raise InvalidInputError(
                    f"original_length {self.original_length} inconsistent with "
                    f"{self.num_frames} frames of stride {self.total_stride}"
                )
        elif self.original_length != 0:
            raise InvalidInputError("original_length must be 0 when num_frames is 0")

    @property
    def spec(self) -> FsqSpec:
        return FsqSpec(num_codebooks=self.num_codebooks, levels=self.levels)

    def to_bytes(self) -> bytes:
        parts = [
            MAGIC,
            struct.pack("<H", self.version),
            struct.pack("<IHB", self.sample_rate, self.total_stride, self.num_codebooks),
            struct.pack("<B", len(self.levels)),
            struct.pack(f"<{len(self.levels)}H", *self.levels),
            struct.pack("<IQ", self.num_frames, self.original_length),
        ]
        return b"".join(parts)


def read_header(data: bytes) -> tuple[BitstreamHeader, int]:
    """Parse a header, returning it and the offset where the payload starts."""
    if len(data) < 4 or data[:4] != MAGIC:
        raise FormatError("not a codec bitstream (bad magic)")
    try:
        (version,) = struct.unpack_from("<H", data, 4)
        if version != VERSION:
            raise FormatError(f"unsupported bitstream version {version}")
        sample_rate, total_stride, num_codebooks = struct.unpack_from("<IHB", data, 6)
        (num_levels,) = struct.unpack_from("<B", data, 13)
        levels = struct.unpack_from(f"<{num_levels}H", data, 14)
        offset = 14 + 2 * num_levels
        num_frames, original_length = struct.unpack_from("<IQ", data, offset)
        offset += 12
    except struct.error as exc:
        raise TruncationError(f"bitstream header truncated: {exc}") from None
    header = BitstreamHeader(
        sample_rate=sample_rate,
        total_stride=total_stride,
        num_codebooks=num_codebooks,
        levels=levels,
        num_frames=num_frames,
        original_length=original_length,
        version=version,
    )
    return header, offset


def payload_size(num_frames: int, spec: FsqSpec) -> int:
    """Exact payload byte count: ceil(frames * codebooks * width / 8)."""
    return (num_frames * spec.num_codebooks * spec.code_bit_width + 7) // 8


def _codes_to_bits(codes: np.ndarray, width: int) -> np.ndarray:
    shifts = np.arange(width - 1, -1, -1, dtype=np.int64)
    bits = (codes.reshape(-1, 1) >> shifts) & 1
    return bits.reshape(-1).astype(np.uint8)


def _bits_to_codes(bits: np.ndarray, width: int) -> np.ndarray:
    weights = (1 << np.arange(width - 1, -1, -1, dtype=np.int64))
    return bits.reshape(-1, width).astype(np.int64) @ weights


def pack(codes: CodeSequence, sample_rate: int, total_stride: int, original_length: int) -> bytes:
    """Serialize a code sequence into a self-describing byte string."""
    spec = codes.spec
    arr = codes.codes
    if arr.size and (arr.min() < 0 or arr.max() >= spec.codes_per_codebook):
        raise InvalidCodeError(f"codes must lie in [0, {spec.codes_per_codebook - 1}]")
    header = BitstreamHeader(
        sample_rate=sample_rate,
        total_stride=total_stride,
        num_codebooks=spec.num_codebooks,
        levels=spec.levels,
        num_frames=codes.num_frames,
        original_length=original_length,
    )
    width = spec.code_bit_width
    bits = _codes_to_bits(arr, width)
    payload = np.packbits(bits).tobytes()  # packbits zero-pads the final byte
    assert len(payload) == payload_size(codes.num_frames, spec)
    return header.to_bytes() + payload


def unpack(data: bytes) -> tuple[BitstreamHeader, CodeSequence]:
    """Exact inverse of pack."""
    header, offset = read_header(data)
    spec = header.spec
    expected = payload_size(header.num_frames, spec)
    payload = data[offset:]
    if len(payload) != expected:
        raise TruncationError(
            f"payload is {len(payload)} bytes, header promises {expected}"
        )
    width = spec.code_bit_width
    nbits = header.num_frames * spec.num_codebooks * width
    bits = np.unpackbits(np.frombuffer(payload, dtype=np.uint8), count=nbits if nbits else None)
    if header.num_frames == 0:
        codes = np.zeros((0, spec.num_codebooks), dtype=np.int64)
    else:
        codes = _bits_to_codes(bits[:nbits], width).reshape(
            header.num_frames, spec.num_codebooks
        )
    if codes.size and codes.max() >= spec.codes_per_codebook:
        raise CorruptionError(
            f"decoded code {int(codes.max())} exceeds maximum "
            f"{spec.codes_per_codebook - 1}"
        )
    return header, CodeSequence(codes=codes, spec=spec)


def bitrate(spec: FsqSpec, sample_rate: float, total_stride: float) -> float:
    """Bits per second of the packed stream (full precision)."""
    if sample_rate <= 0 or total_stride <= 0:
        raise InvalidInputError("sample_rate and total_stride must be positive")
    return spec.num_codebooks * spec.code_bit_width * sample_rate / total_stride


def token_rate(spec: FsqSpec, sample_rate: float, total_stride: float) -> float:
    """Discrete codes emitted per second (full precision)."""
    if sample_rate <= 0 or total_stride <= 0:
        raise InvalidInputError("sample_rate and total_stride must be positive")
    return spec.num_codebooks * sample_rate / total_stride


def kbps_display(spec: FsqSpec, sample_rate: int, total_stride: int) -> float:
    """Bitrate in kbps truncated to two decimals, the convention the
    published rate tables follow (2067.1875 bps reads as 2.06, not 2.07)."""
    bits_per_frame = spec.num_codebooks * spec.code_bit_width
    hundredths = (bits_per_frame * sample_rate) // (total_stride * 10)
    return hundredths / 100.0


def tokens_display(num_codebooks: int, sample_rate: int, total_stride: int) -> int:
    """Token rate as the rate tables print it: frame rate truncated to one
    decimal first, then codebooks * FPS truncated to an integer."""
    fps_tenths = (sample_rate * 10) // total_stride
    return (num_codebooks * fps_tenths) // 10


def fps_display(sample_rate: int, total_stride: int) -> float:
    """Frame rate truncated to one decimal."""
    return ((sample_rate * 10) // total_stride) / 10.0
