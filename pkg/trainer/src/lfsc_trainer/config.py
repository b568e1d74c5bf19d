"""Training and generator configuration."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class GeneratorConfig:
    """Geometry of the generator; mirrors the runtime's weight registry."""

    sample_rate: int = 22050
    num_codebooks: int = 8
    levels: tuple[int, ...] = (8, 7, 6, 6)
    strides: tuple[int, ...] = (2, 2, 4, 8, 8)
    residual_layers_per_block: int = 3
    encoder_channels: int = 48
    residual_kernel: int = 3
    dilation: int = 1
    input_kernel: int = 7
    upsample_rates: tuple[int, ...] = (8, 8, 4, 2, 2)
    decoder_channels: int = 1024
    resblock_kernels: tuple[int, ...] = (3, 7, 11)
    resblock_dilations: tuple[int, ...] = (1, 3, 5)
    output_kernel: int = 7

    @property
    def total_stride(self) -> int:
        return math.prod(self.strides)

    @property
    def latent_dim(self) -> int:
        return self.num_codebooks * len(self.levels)


def toy_generator_config() -> GeneratorConfig:
    """Reduced channel widths, full stride structure."""
    return GeneratorConfig(encoder_channels=4, decoder_channels=32)


@dataclass(frozen=True)
class TrainConfig:
    adam_beta1: float = 0.8
    adam_beta2: float = 0.99
    learning_rate: float = 2e-4
    lr_gamma: float = 0.998
    excerpt_seconds: float = 1.1
    batch_size: int = 2
    phase1_steps: int = 500
    phase2_steps: int = 500
    mel_weight: float = 45.0
    adv_weight: float = 1.0
    fm_weight: float = 2.0
    seed: int = 0
    log_every: int = 10

    def excerpt_samples(self, sample_rate: int) -> int:
        return int(round(self.excerpt_seconds * sample_rate))

    def padded_excerpt(self, sample_rate: int, total_stride: int) -> int:
        """Excerpt length after zero-padding to whole frames."""
        n = self.excerpt_samples(sample_rate)
        return math.ceil(n / total_stride) * total_stride

    def lr_at(self, step: int) -> float:
        """Exact schedule value: lr * gamma**step."""
        return self.learning_rate * self.lr_gamma**step
