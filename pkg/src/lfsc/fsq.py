"""Finite scalar quantization.

Each latent dimension is squashed with tanh, scaled to its level range and
rounded; the per-dimension indices of one codebook combine into a single
code by mixed-radix packing. All functions are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidCodeError, InvalidInputError, ShapeError

DEFAULT_LEVELS = (8, 7, 6, 6)
DEFAULT_NUM_CODEBOOKS = 8

# Documented stand-ins for the 1000-code and 4032-code ablation settings.
LEVELS_1000 = (8, 5, 5, 5)
LEVELS_4032 = (8, 7, 6, 12)


@dataclass(frozen=True)
class FsqSpec:
    """Quantizer geometry: codebook count and per-dimension level counts."""

    num_codebooks: int = DEFAULT_NUM_CODEBOOKS
    levels: tuple[int, ...] = DEFAULT_LEVELS

    def __post_init__(self):
        if self.num_codebooks < 1:
            raise InvalidInputError(f"num_codebooks must be >= 1, got {self.num_codebooks}")
        if len(self.levels) == 0 or any(L < 2 for L in self.levels):
            raise InvalidInputError(f"levels must all be >= 2, got {self.levels}")
        object.__setattr__(self, "levels", tuple(int(L) for L in self.levels))

    @property
    def dims_per_code(self) -> int:
        return len(self.levels)

    @property
    def codes_per_codebook(self) -> int:
        return math.prod(self.levels)

    @property
    def code_bit_width(self) -> int:
        """Smallest w with 2**w >= codes_per_codebook."""
        return max(1, (self.codes_per_codebook - 1).bit_length())

    @property
    def latent_dim(self) -> int:
        """Width of the continuous latent consumed by the quantizer."""
        return self.num_codebooks * self.dims_per_code


@dataclass
class LatentSequence:
    """Continuous latent activations, frames x (codebooks * dims)."""

    values: np.ndarray
    frame_rate: float | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2:
            raise ShapeError(f"latent must be 2-D (frames x dims), got ndim={self.values.ndim}")

    @property
    def num_frames(self) -> int:
        return self.values.shape[0]


@dataclass
class CodeSequence:
    """Quantized codes, frames x codebooks, each code < codes_per_codebook."""

    codes: np.ndarray
    spec: FsqSpec

    def __post_init__(self):
        self.codes = np.asarray(self.codes, dtype=np.int64)
        if self.codes.ndim != 2:
            raise ShapeError(f"codes must be 2-D (frames x codebooks), got ndim={self.codes.ndim}")
        if self.codes.shape[1] != self.spec.num_codebooks:
            raise ShapeError(
                f"expected {self.spec.num_codebooks} codebooks, got {self.codes.shape[1]}"
            )
        if self.codes.size and (
            self.codes.min() < 0 or self.codes.max() >= self.spec.codes_per_codebook
        ):
            raise InvalidCodeError(
                f"codes must lie in [0, {self.spec.codes_per_codebook - 1}]"
            )

    @property
    def num_frames(self) -> int:
        return self.codes.shape[0]


def quantize_dim(z: float, num_levels: int) -> int:
    """Quantize one latent value to an index in {0, ..., L-1}.

    The value is bounded by ((L-1)/2) * tanh(z), shifted to [0, L-1] and
    rounded half up, so the map is monotone and saturates at the ends.
    """
    if num_levels < 2:
        raise InvalidInputError(f"need at least 2 levels, got {num_levels}")
    if not math.isfinite(z):
        raise InvalidInputError(f"latent value must be finite, got {z}")
    half = 0.5 * (num_levels - 1)
    return int(math.floor(half * math.tanh(z) + half + 0.5))


def dequantize_dim(index: int, num_levels: int) -> float:
    """Map an index back to its grid value, uniform on [-1, 1]."""
    if num_levels < 2:
        raise InvalidInputError(f"need at least 2 levels, got {num_levels}")
    if not 0 <= index <= num_levels - 1:
        raise InvalidCodeError(f"index {index} out of range for {num_levels} levels")
    return (2.0 * index - (num_levels - 1)) / (num_levels - 1)


def indices_to_code(indices, spec: FsqSpec) -> int:
    """Pack per-dimension indices into one code, first dimension least significant."""
    indices = list(indices)
    if len(indices) != spec.dims_per_code:
        raise ShapeError(f"expected {spec.dims_per_code} indices, got {len(indices)}")
    code = 0
    for i, L in zip(reversed(indices), reversed(spec.levels)):
        if not 0 <= i < L:
            raise InvalidCodeError(f"index {i} out of range for level count {L}")
        code = code * L + int(i)
    return code


def code_to_indices(code: int, spec: FsqSpec) -> list[int]:
    """Invert indices_to_code."""
    if not 0 <= code < spec.codes_per_codebook:
        raise InvalidCodeError(
            f"code {code} out of range for {spec.codes_per_codebook} codes"
        )
    out = []
    for L in spec.levels:
        code, i = divmod(code, L)
        out.append(int(i))
    return out


def _radix_weights(spec: FsqSpec) -> np.ndarray:
    # weight of dim d is the product of all earlier level counts
    return np.cumprod((1,) + spec.levels[:-1]).astype(np.int64)


def quantize_array(z: np.ndarray, num_levels) -> np.ndarray:
    """Vectorized quantize_dim; `num_levels` broadcasts against `z`."""
    z = np.asarray(z, dtype=np.float64)
    if not np.all(np.isfinite(z)):
        raise InvalidInputError("latent values must be finite")
    L = np.asarray(num_levels, dtype=np.float64)
    half = 0.5 * (L - 1.0)
    return np.floor(half * np.tanh(z) + half + 0.5).astype(np.int64)


def dequantize_array(indices: np.ndarray, num_levels) -> np.ndarray:
    """Vectorized dequantize_dim."""
    indices = np.asarray(indices, dtype=np.int64)
    L = np.asarray(num_levels, dtype=np.int64)
    if np.any(indices < 0) or np.any(indices > L - 1):
        raise InvalidCodeError("index out of range")
    return (2.0 * indices - (L - 1)) / (L - 1)


def quantize_frames(latent: LatentSequence, spec: FsqSpec) -> CodeSequence:
    """Quantize a latent sequence into codes, one per codebook per frame."""
    values = latent.values
    if values.shape[1] != spec.latent_dim:
        raise ShapeError(
            f"latent width {values.shape[1]} != codebooks*dims = {spec.latent_dim}"
        )
    frames = values.shape[0]
    grouped = values.reshape(frames, spec.num_codebooks, spec.dims_per_code)
    indices = quantize_array(grouped, np.asarray(spec.levels))
    codes = indices @ _radix_weights(spec)
    return CodeSequence(codes=codes, spec=spec)


def dequantize_frames(codes: CodeSequence, spec: FsqSpec, frame_rate: float | None = None) -> LatentSequence:
    """Reconstruct the grid latent for a code sequence.

    Codes survive a round trip through the quantizer only via tanh
    pre-images (the grid values themselves live after the tanh bound);
    see the grid fixed-point property in the tests.
    """
    arr = codes.codes
    if arr.size and (arr.min() < 0 or arr.max() >= spec.codes_per_codebook):
        raise InvalidCodeError(f"codes must lie in [0, {spec.codes_per_codebook - 1}]")
    frames = arr.shape[0]
    remaining = arr.astype(np.int64)
    dims = []
    for L in spec.levels:
        remaining, idx = np.divmod(remaining, L)
        dims.append(idx)
    indices = np.stack(dims, axis=-1)  # frames x codebooks x dims
    values = dequantize_array(indices, np.asarray(spec.levels))
    return LatentSequence(values=values.reshape(frames, spec.latent_dim), frame_rate=frame_rate)
