"""Codec forward passes: waveform -> codes and codes -> waveform.

The encoder stacks residual blocks, each followed by a strided
downsampling convolution that doubles the channel width; a width-1
projection produces the quantizer latent. The decoder mirrors a
multi-receptive-field vocoder: transposed-convolution upsampling stages,
each followed by averaged residual stacks over several kernel sizes.
Weights are immutable after load; every call allocates its own buffers,
so one weight set serves any number of concurrent sessions.
"""

from __future__ import annotations

import math

import numpy as np

from .audio import AudioBuffer
from .errors import (
    InvalidCodeError,
    InvalidInputError,
    LengthError,
    UnsupportedLayoutError,
    UnsupportedRateError,
)
from .fsq import CodeSequence, LatentSequence, dequantize_frames, quantize_frames
from .nn import conv1d, conv1d_down, conv1d_same, conv1d_up, leaky_relu
from .weights import ModelWeights

LRELU_SLOPE = 0.1


def frame_rate(sample_rate: float, total_stride: float) -> float:
    """Frames emitted per second of audio."""
    if sample_rate <= 0 or total_stride <= 0:
        raise InvalidInputError("sample_rate and total_stride must be positive")
    return sample_rate / total_stride


def _residual_layer(h: np.ndarray, w, prefix: str, kernel_dilation: int) -> np.ndarray:
    r = leaky_relu(h, LRELU_SLOPE)
    r = conv1d_same(r, w[f"{prefix}.conv1.weight"], w[f"{prefix}.conv1.bias"], kernel_dilation)
    r = leaky_relu(r, LRELU_SLOPE)
    r = conv1d_same(r, w[f"{prefix}.conv2.weight"], w[f"{prefix}.conv2.bias"], 1)
    return h + r


def encoder_forward(x: np.ndarray, weights: ModelWeights) -> np.ndarray:
    """Map (T,) float samples (T a multiple of the stride) to (frames, latent_dim)."""
    cfg = weights.config.encoder
    w = weights.tensors
    h = conv1d_same(x.reshape(1, -1).astype(np.float32), w["encoder.input.weight"], w["encoder.input.bias"])
    for i, stride in enumerate(cfg.strides):
        for j in range(cfg.residual_layers_per_block):
            h = _residual_layer(h, w, f"encoder.block{i}.res{j}", cfg.dilation)
        h = conv1d_down(
            leaky_relu(h, LRELU_SLOPE),
            w[f"encoder.block{i}.down.weight"],
            w[f"encoder.block{i}.down.bias"],
            stride,
        )
    h = conv1d(h, w["encoder.latent_proj.weight"], w["encoder.latent_proj.bias"])
    return h.T


def decoder_forward(latent: np.ndarray, weights: ModelWeights) -> np.ndarray:
    """Map (frames, latent_dim) to (frames * total_stride,) samples in [-1, 1]."""
    cfg = weights.config.decoder
    w = weights.tensors
    h = conv1d(
        latent.T.astype(np.float32),
        w["decoder.latent_proj.weight"],
        w["decoder.latent_proj.bias"],
    )
    for i, rate in enumerate(cfg.upsample_rates):
        h = conv1d_up(
            leaky_relu(h, LRELU_SLOPE),
            w[f"decoder.stage{i}.up.weight"],
            w[f"decoder.stage{i}.up.bias"],
            rate,
        )
        acc = np.zeros_like(h)
        for k in range(len(cfg.resblock_kernels)):
            branch = h
            for j, dilation in enumerate(cfg.resblock_dilations):
                branch = _residual_layer(branch, w, f"decoder.stage{i}.res{k}_{j}", dilation)
            acc += branch
        h = acc / len(cfg.resblock_kernels)
    h = conv1d_same(leaky_relu(h, LRELU_SLOPE), w["decoder.output.weight"], w["decoder.output.bias"])
    return np.tanh(h[0])


def encode(audio: AudioBuffer, weights: ModelWeights) -> CodeSequence:
    """Quantize audio into a code matrix of shape ceil(N/stride) x codebooks.

    The input is zero right-padded to a whole number of frames; callers
    record the original length (the bitstream header has a field for it).
    """
    cfg = weights.config
    samples = np.asarray(audio.samples)
    if samples.ndim != 1:
        raise UnsupportedLayoutError(f"expected mono audio, got shape {samples.shape}")
    if audio.sample_rate != cfg.sample_rate:
        raise UnsupportedRateError(
            f"model expects {cfg.sample_rate} Hz, audio is {audio.sample_rate} Hz"
        )
    n = samples.shape[0]
    if n < 1:
        raise InvalidInputError("cannot encode an empty buffer")
    stride = cfg.total_stride
    frames = math.ceil(n / stride)
    padded = np.zeros(frames * stride, dtype=np.float32)
    padded[:n] = samples
    latent = encoder_forward(padded, weights)
    return quantize_frames(
        LatentSequence(values=latent, frame_rate=cfg.frame_rate), cfg.fsq
    )


def decode(
    codes: CodeSequence, weights: ModelWeights, original_length: int | None = None
) -> AudioBuffer:
    """Reconstruct audio from codes; trims to original_length when given."""
    cfg = weights.config
    if codes.spec != cfg.fsq:
        raise InvalidCodeError(
            f"code spec {codes.spec.num_codebooks}x{codes.spec.levels} does not match "
            f"model spec {cfg.fsq.num_codebooks}x{cfg.fsq.levels}"
        )
    raw_length = codes.num_frames * cfg.total_stride
    if original_length is not None and original_length > raw_length:
        raise LengthError(
            f"original_length {original_length} exceeds decoded length {raw_length}"
        )
    if codes.num_frames == 0:
        return AudioBuffer(samples=np.zeros(0), sample_rate=cfg.sample_rate)
    latent = dequantize_frames(codes, cfg.fsq, frame_rate=cfg.frame_rate)
    samples = decoder_forward(latent.values, weights)
    samples = np.clip(samples, -1.0, 1.0)
    if original_length is not None:
        samples = samples[:original_length]
    return AudioBuffer(samples=samples, sample_rate=cfg.sample_rate)
