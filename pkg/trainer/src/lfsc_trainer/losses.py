"""Adversarial, feature-matching and reconstruction losses."""

from __future__ import annotations

import math

import torch
from torch import Tensor, nn

from .errors import ShapeError


def gan_losses(real_scores: Tensor, fake_scores: Tensor) -> tuple[Tensor, Tensor]:
    """Least-squares GAN objectives.

    Returns (discriminator loss, generator adversarial loss):
    L_D = mean((D(x) - 1)^2) + mean(D(x_hat)^2), L_G = mean((D(x_hat) - 1)^2).
    """
    if real_scores.shape != fake_scores.shape:
        raise ShapeError(f"score shapes differ: {tuple(real_scores.shape)} vs {tuple(fake_scores.shape)}")
    loss_d = torch.mean((real_scores - 1.0) ** 2) + torch.mean(fake_scores**2)
    loss_g = torch.mean((fake_scores - 1.0) ** 2)
    return loss_d, loss_g


def feature_matching_loss(real_features: list[Tensor], fake_features: list[Tensor]) -> Tensor:
    """Mean over layers of the mean absolute feature difference."""
    if len(real_features) != len(fake_features):
        raise ShapeError(f"layer counts differ: {len(real_features)} vs {len(fake_features)}")
    total = 0.0
    for real, fake in zip(real_features, fake_features):
        if real.shape != fake.shape:
            raise ShapeError(f"feature shapes differ: {tuple(real.shape)} vs {tuple(fake.shape)}")
        total = total + torch.mean(torch.abs(real - fake))
    return total / len(real_features)


def _hz_to_mel(f: float) -> float:
    return 2595.0 * math.log10(1.0 + f / 700.0)


def _mel_to_hz(m: float) -> float:
    return 700.0 * (10.0 ** (m / 2595.0) - 1.0)


def _mel_filterbank(fft_size: int, sample_rate: int, n_mels: int) -> Tensor:
    top = _hz_to_mel(sample_rate / 2.0)
    points = [_mel_to_hz(top * i / (n_mels + 1)) for i in range(n_mels + 2)]
    n_bins = fft_size // 2 + 1
    bank = torch.zeros(n_mels, n_bins)
    for m in range(n_mels):
        lo, mid, hi = points[m], points[m + 1], points[m + 2]
        for k in range(n_bins):
            f = k * sample_rate / fft_size
            if lo <= f <= mid and mid > lo:
                bank[m, k] = (f - lo) / (mid - lo)
            elif mid < f <= hi and hi > mid:
                bank[m, k] = (hi - f) / (hi - mid)
    return bank


class MultiResolutionMelLoss(nn.Module):
    """L1 between log mel power spectrograms at several analysis scales."""

    RESOLUTIONS = ((1024, 256, 80), (512, 128, 40), (256, 64, 20))

    def __init__(self, sample_rate: int, log_floor: float = 1e-5):
        super().__init__()
        self.log_floor = log_floor
        self.resolutions = self.RESOLUTIONS
        for i, (fft, _, mels) in enumerate(self.resolutions):
            self.register_buffer(f"bank{i}", _mel_filterbank(fft, sample_rate, mels), persistent=False)
            self.register_buffer(f"window{i}", torch.hann_window(fft, periodic=True), persistent=False)

    def _log_mel(self, x: Tensor, i: int) -> Tensor:
        fft, hop, _ = self.resolutions[i]
        window = getattr(self, f"window{i}")
        spec = torch.stft(x, fft, hop_length=hop, window=window, center=True, return_complex=True)
        power = spec.real**2 + spec.imag**2
        mel = torch.matmul(getattr(self, f"bank{i}"), power)
        return torch.log(mel + self.log_floor)

    def forward(self, real: Tensor, fake: Tensor) -> Tensor:
        total = 0.0
        for i in range(len(self.resolutions)):
            total = total + torch.mean(torch.abs(self._log_mel(real, i) - self._log_mel(fake, i)))
        return total / len(self.resolutions)
