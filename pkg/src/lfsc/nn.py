"""Minimal 1-D convolution kernels on numpy arrays.

Everything operates on (channels, time) float32 arrays. Convolutions are
reduced to matrix products so BLAS does the heavy lifting; that keeps the
full-size forward pass tractable on a single CPU core.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


def leaky_relu(x: np.ndarray, slope: float = 0.1) -> np.ndarray:
    return np.where(x >= 0, x, slope * x)


def conv1d(
    x: np.ndarray,
    weight: np.ndarray,
    bias: np.ndarray,
    stride: int = 1,
    dilation: int = 1,
    padding: tuple[int, int] = (0, 0),
) -> np.ndarray:
    """Cross-correlation of (C_in, T) with weight (C_out, C_in, K)."""
    c_out, c_in, k = weight.shape
    assert x.shape[0] == c_in, (x.shape, weight.shape)
    xp = np.pad(x, ((0, 0), padding)) if any(padding) else x
    span = (k - 1) * dilation + 1
    t_out = (xp.shape[1] - span) // stride + 1
    windows = sliding_window_view(xp, span, axis=1)[:, ::stride, ::dilation]
    windows = windows[:, :t_out]
    cols = windows.transpose(0, 2, 1).reshape(c_in * k, t_out)
    out = weight.reshape(c_out, c_in * k) @ cols
    return out + bias[:, None]


def conv1d_same(
    x: np.ndarray,
    weight: np.ndarray,
    bias: np.ndarray,
    dilation: int = 1,
) -> np.ndarray:
    """Stride-1 convolution with symmetric padding preserving length (odd kernels)."""
    k = weight.shape[2]
    pad = dilation * (k - 1) // 2
    return conv1d(x, weight, bias, stride=1, dilation=dilation, padding=(pad, pad))


def conv1d_down(x: np.ndarray, weight: np.ndarray, bias: np.ndarray, stride: int) -> np.ndarray:
    """Strided convolution with kernel 2*stride and symmetric padding stride/2,
    so an input of length m*stride maps to exactly m steps."""
    k = weight.shape[2]
    assert k == 2 * stride and stride % 2 == 0, (k, stride)
    pad = stride // 2
    return conv1d(x, weight, bias, stride=stride, padding=(pad, pad))


def conv_transpose1d(
    x: np.ndarray,
    weight: np.ndarray,
    bias: np.ndarray,
    stride: int,
    padding: int,
) -> np.ndarray:
    """Transposed convolution of (C_in, T) with weight (C_in, C_out, K).

    Output length is (T-1)*stride + K - 2*padding; with K = 2*stride and
    padding = stride/2 that is exactly T*stride.
    """
    c_in, c_out, k = weight.shape
    assert x.shape[0] == c_in, (x.shape, weight.shape)
    t = x.shape[1]
    full = (t - 1) * stride + k
    out = np.zeros((c_out, full), dtype=np.float32)
    for tap in range(k):
        out[:, tap : tap + (t - 1) * stride + 1 : stride] += weight[:, :, tap].T @ x
    out = out[:, padding : full - padding] if padding else out
    return out + bias[:, None]


def conv1d_up(x: np.ndarray, weight: np.ndarray, bias: np.ndarray, rate: int) -> np.ndarray:
    """Transposed convolution with kernel 2*rate mapping m steps to m*rate."""
    k = weight.shape[2]
    assert k == 2 * rate and rate % 2 == 0, (k, rate)
    return conv_transpose1d(x, weight, bias, stride=rate, padding=rate // 2)
