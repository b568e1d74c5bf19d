"""Model configuration and the canonical tensor registry.

The registry fixes tensor names, shapes and their order in the weight
file; anything producing weights for the runtime must match it exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ValidationError
from .fsq import FsqSpec


@dataclass(frozen=True)
class EncoderConfig:
    strides: tuple[int, ...] = (2, 2, 4, 8, 8)
    residual_layers_per_block: int = 3
    initial_channels: int = 48
    residual_kernel: int = 3
    dilation: int = 1
    input_kernel: int = 7

    @property
    def num_blocks(self) -> int:
        return len(self.strides)

    @property
    def total_stride(self) -> int:
        return math.prod(self.strides)

    def channels_after_block(self, k: int) -> int:
        """Channel width after k downsampling layers (k in 0..num_blocks)."""
        return self.initial_channels * (2**k)

    @property
    def output_channels(self) -> int:
        return self.channels_after_block(self.num_blocks)


@dataclass(frozen=True)
class DecoderConfig:
    upsample_rates: tuple[int, ...] = (8, 8, 4, 2, 2)
    initial_channels: int = 1024
    resblock_kernels: tuple[int, ...] = (3, 7, 11)
    resblock_dilations: tuple[int, ...] = (1, 3, 5)
    output_kernel: int = 7

    @property
    def num_stages(self) -> int:
        return len(self.upsample_rates)

    @property
    def total_stride(self) -> int:
        return math.prod(self.upsample_rates)

    def channels_after_stage(self, k: int) -> int:
        """Channel width after k upsampling layers (k in 0..num_stages)."""
        return self.initial_channels // (2**k)

    @property
    def output_channels(self) -> int:
        return self.channels_after_stage(self.num_stages)


@dataclass(frozen=True)
class ModelConfig:
    sample_rate: int = 22050
    fsq: FsqSpec = field(default_factory=FsqSpec)
    encoder: EncoderConfig = field(default_factory=EncoderConfig)
    decoder: DecoderConfig = field(default_factory=DecoderConfig)

    def __post_init__(self):
        if self.encoder.total_stride != self.decoder.total_stride:
            raise ValidationError(
                f"encoder stride product {self.encoder.total_stride} != "
                f"decoder upsample product {self.decoder.total_stride}"
            )
        if self.decoder.initial_channels % (2**self.decoder.num_stages):
            raise ValidationError(
                "decoder initial_channels must be divisible by 2**num_stages"
            )
        for stride in self.encoder.strides + self.decoder.upsample_rates:
            if stride % 2:
                raise ValidationError(f"strides/rates must be even, got {stride}")

    @property
    def total_stride(self) -> int:
        return self.encoder.total_stride

    @property
    def frame_rate(self) -> float:
        return self.sample_rate / self.total_stride


def reduced_config(fsq: FsqSpec | None = None) -> ModelConfig:
    """Small-channel variant with the full stride structure; used for tests
    and desk-scale experiments."""
    return ModelConfig(
        fsq=fsq or FsqSpec(),
        encoder=EncoderConfig(initial_channels=4),
        decoder=DecoderConfig(initial_channels=64),
    )


def tensor_shapes(cfg: ModelConfig) -> dict[str, tuple[int, ...]]:
    """Ordered name -> shape map of every tensor the runtime requires.

    Convolution weights are (out, in, kernel); transposed convolutions
    (the decoder's `up` tensors) are (in, out, kernel).
    """
    enc, dec, latent = cfg.encoder, cfg.decoder, cfg.fsq.latent_dim
    shapes: dict[str, tuple[int, ...]] = {}

    def conv(name, c_out, c_in, k):
        shapes[f"{name}.weight"] = (c_out, c_in, k)
        shapes[f"{name}.bias"] = (c_out,)

    conv("encoder.input", enc.initial_channels, 1, enc.input_kernel)
    for i, stride in enumerate(enc.strides):
        ch = enc.channels_after_block(i)
        for j in range(enc.residual_layers_per_block):
            conv(f"encoder.block{i}.res{j}.conv1", ch, ch, enc.residual_kernel)
            conv(f"encoder.block{i}.res{j}.conv2", ch, ch, enc.residual_kernel)
        shapes[f"encoder.block{i}.down.weight"] = (2 * ch, ch, 2 * stride)
        shapes[f"encoder.block{i}.down.bias"] = (2 * ch,)
    conv("encoder.latent_proj", latent, enc.output_channels, 1)

    conv("decoder.latent_proj", dec.initial_channels, latent, 1)
    for i, rate in enumerate(dec.upsample_rates):
        c_in = dec.channels_after_stage(i)
        c_out = dec.channels_after_stage(i + 1)
        shapes[f"decoder.stage{i}.up.weight"] = (c_in, c_out, 2 * rate)
        shapes[f"decoder.stage{i}.up.bias"] = (c_out,)
        for k in range(len(dec.resblock_kernels)):
            for j in range(len(dec.resblock_dilations)):
                kernel = dec.resblock_kernels[k]
                conv(f"decoder.stage{i}.res{k}_{j}.conv1", c_out, c_out, kernel)
                conv(f"decoder.stage{i}.res{k}_{j}.conv2", c_out, c_out, kernel)
    conv("decoder.output", 1, dec.output_channels, dec.output_kernel)
    return shapes
