"""The three adversarial critics, at desk-scale channel widths.

Each sub-discriminator returns (score map, per-layer feature list). The
speech-feature critic keeps its randomly initialized extractor frozen; a
pretrained speech representation model is a drop-in replacement for it.
"""

from __future__ import annotations

import hashlib

import torch
import torch.nn.functional as F
from torch import Tensor, nn

LRELU_SLOPE = 0.1

MPD_PERIODS = (2, 3, 5, 7, 11)
STFT_WINDOWS = (2048, 1024, 512)
SLM_SAMPLE_RATE = 16000
SLM_LAYERS = 12


class PeriodDiscriminator(nn.Module):
    """Views the waveform reshaped to (time/period, period) as an image."""

    def __init__(self, period: int, channels: int = 8):
        super().__init__()
        self.period = period
        chs = [1, channels, channels * 2, channels * 4, channels * 4]
        self.convs = nn.ModuleList(
            nn.Conv2d(chs[i], chs[i + 1], (5, 1), stride=(3, 1), padding=(2, 0))
            for i in range(4)
        )
        self.post = nn.Conv2d(chs[-1], 1, (3, 1), padding=(1, 0))

    def forward(self, x: Tensor) -> tuple[Tensor, list[Tensor]]:
        b, t = x.shape
        if t % self.period:
            x = F.pad(x, (0, self.period - t % self.period), mode="reflect")
        x = x.view(b, 1, -1, self.period)
        features = []
        for conv in self.convs:
            x = F.leaky_relu(conv(x), LRELU_SLOPE)
            features.append(x)
        score = self.post(x)
        features.append(score)
        return score, features


class SpectrogramDiscriminator(nn.Module):
    """2-D convolutions over the complex short-time spectrum (real, imag)."""

    def __init__(self, fft_size: int, channels: int = 8):
        super().__init__()
        self.fft_size = fft_size
        self.hop = fft_size // 4
        self.register_buffer("window", torch.hann_window(fft_size, periodic=True), persistent=False)
        chs = [2, channels, channels * 2, channels * 2]
        self.convs = nn.ModuleList(
            nn.Conv2d(chs[i], chs[i + 1], (3, 3), stride=(2, 1), padding=(1, 1))
            for i in range(3)
        )
        self.post = nn.Conv2d(chs[-1], 1, (3, 3), padding=(1, 1))

    def forward(self, x: Tensor) -> tuple[Tensor, list[Tensor]]:
        spec = torch.stft(
            x, self.fft_size, hop_length=self.hop, window=self.window,
            center=True, return_complex=True,
        )
        h = torch.stack([spec.real, spec.imag], dim=1)
        features = []
        for conv in self.convs:
            h = F.leaky_relu(conv(h), LRELU_SLOPE)
            features.append(h)
        score = self.post(h)
        features.append(score)
        return score, features


class SpeechFeatureDiscriminator(nn.Module):
    """Frozen random conv stack standing in for a pretrained speech model,
    with a trainable head of four 1-D convolutions.

    Input is resampled to 16 kHz; all 12 tap layers are concatenated on the
    channel axis before the head, and the extractor never receives
    gradient updates.
    """

    def __init__(self, sample_rate: int, channels: int = 16, seed: int = 1234):
        super().__init__()
        self.sample_rate = sample_rate
        generator = torch.Generator().manual_seed(seed)
        stem = nn.Conv1d(1, channels, 10, stride=5, padding=5)
        taps = nn.ModuleList(
            nn.Conv1d(channels, channels, 3, stride=2 if i < 3 else 1, padding=1)
            for i in range(SLM_LAYERS)
        )
        with torch.no_grad():
            for module in [stem, *taps]:
                module.weight.copy_(
                    torch.randn(module.weight.shape, generator=generator) * 0.3
                )
                module.bias.zero_()
        self.stem = stem
        self.taps = taps
        for p in self.extractor_parameters():
            p.requires_grad_(False)
        head_in = channels * SLM_LAYERS
        self.head = nn.ModuleList(
            [
                nn.Conv1d(head_in, channels * 2, 3, padding=1),
                nn.Conv1d(channels * 2, channels * 2, 3, padding=1),
                nn.Conv1d(channels * 2, channels, 3, padding=1),
                nn.Conv1d(channels, 1, 3, padding=1),
            ]
        )

    def extractor_parameters(self):
        yield from self.stem.parameters()
        yield from self.taps.parameters()

    def extractor_checksum(self) -> str:
        digest = hashlib.sha256()
        for p in self.extractor_parameters():
            digest.update(p.detach().cpu().numpy().tobytes())
        return digest.hexdigest()

    def forward(self, x: Tensor) -> tuple[Tensor, list[Tensor]]:
        x = F.interpolate(
            x.unsqueeze(1),
            scale_factor=SLM_SAMPLE_RATE / self.sample_rate,
            mode="linear",
            align_corners=False,
        )
        h = torch.tanh(self.stem(x))
        tapped = []
        shortest = None
        for conv in self.taps:
            h = torch.tanh(conv(h))
            tapped.append(h)
            shortest = h.shape[-1] if shortest is None else min(shortest, h.shape[-1])
        stacked = torch.cat([t[..., :shortest] for t in tapped], dim=1)
        features = []
        out = stacked
        for i, conv in enumerate(self.head):
            out = conv(out)
            if i < len(self.head) - 1:
                out = F.leaky_relu(out, LRELU_SLOPE)
            features.append(out)
        return out, features


class DiscriminatorSet(nn.Module):
    """Multi-period + multi-scale spectrogram + speech-feature critics."""

    def __init__(self, sample_rate: int, channels: int = 8):
        super().__init__()
        self.period_discs = nn.ModuleList(
            PeriodDiscriminator(p, channels) for p in MPD_PERIODS
        )
        self.spec_discs = nn.ModuleList(
            SpectrogramDiscriminator(w, channels) for w in STFT_WINDOWS
        )
        self.slm = SpeechFeatureDiscriminator(sample_rate, channels * 2)

    def forward(self, x: Tensor) -> list[tuple[Tensor, list[Tensor]]]:
        outputs = [d(x) for d in self.period_discs]
        outputs += [d(x) for d in self.spec_discs]
        outputs.append(self.slm(x))
        return outputs

    def trainable_parameters(self):
        frozen = {id(p) for p in self.slm.extractor_parameters()}
        return (p for p in self.parameters() if id(p) not in frozen)
