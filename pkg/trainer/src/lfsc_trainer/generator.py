"""Torch generator whose weights map one-to-one onto the runtime registry.

Padding and activation conventions match the runtime exactly: stride-1
convs use symmetric same padding, downsampling convs use kernel 2*stride
with padding stride/2, upsampling transposed convs use kernel 2*rate with
padding rate/2, leaky ReLU slope 0.1 everywhere, tanh on the output.
"""

from __future__ import annotations

import torch
import torch.nn.functional as F
from torch import Tensor, nn

from .config import GeneratorConfig
from .fsq import FsqLayer

LRELU_SLOPE = 0.1


def _same_conv(c_in, c_out, kernel, dilation=1):
    return nn.Conv1d(c_in, c_out, kernel, dilation=dilation, padding=dilation * (kernel - 1) // 2)


class ResidualLayer(nn.Module):
    def __init__(self, channels: int, kernel: int, dilation: int):
        super().__init__()
        self.conv1 = _same_conv(channels, channels, kernel, dilation)
        self.conv2 = _same_conv(channels, channels, kernel, 1)

    def forward(self, x: Tensor) -> Tensor:
        r = self.conv1(F.leaky_relu(x, LRELU_SLOPE))
        r = self.conv2(F.leaky_relu(r, LRELU_SLOPE))
        return x + r


class EncoderBlock(nn.Module):
    def __init__(self, channels: int, stride: int, cfg: GeneratorConfig):
        super().__init__()
        self.res = nn.ModuleList(
            ResidualLayer(channels, cfg.residual_kernel, cfg.dilation)
            for _ in range(cfg.residual_layers_per_block)
        )
        self.down = nn.Conv1d(channels, 2 * channels, 2 * stride, stride=stride, padding=stride // 2)

    def forward(self, x: Tensor) -> Tensor:
        for layer in self.res:
            x = layer(x)
        return self.down(F.leaky_relu(x, LRELU_SLOPE))


class Encoder(nn.Module):
    def __init__(self, cfg: GeneratorConfig):
        super().__init__()
        self.input = _same_conv(1, cfg.encoder_channels, cfg.input_kernel)
        self.blocks = nn.ModuleList(
            EncoderBlock(cfg.encoder_channels * 2**i, stride, cfg)
            for i, stride in enumerate(cfg.strides)
        )
        top = cfg.encoder_channels * 2 ** len(cfg.strides)
        self.latent_proj = nn.Conv1d(top, cfg.latent_dim, 1)

    def forward(self, x: Tensor) -> Tensor:
        h = self.input(x)
        for block in self.blocks:
            h = block(h)
        return self.latent_proj(h)


class DecoderStage(nn.Module):
    def __init__(self, c_in: int, rate: int, cfg: GeneratorConfig):
        super().__init__()
        c_out = c_in // 2
        self.up = nn.ConvTranspose1d(c_in, c_out, 2 * rate, stride=rate, padding=rate // 2)
        self.res = nn.ModuleList(
            nn.ModuleList(
                ResidualLayer(c_out, kernel, dilation)
                for dilation in cfg.resblock_dilations
            )
            for kernel in cfg.resblock_kernels
        )

    def forward(self, x: Tensor) -> Tensor:
        x = self.up(F.leaky_relu(x, LRELU_SLOPE))
        acc = None
        for branch_layers in self.res:
            branch = x
            for layer in branch_layers:
                branch = layer(branch)
            acc = branch if acc is None else acc + branch
        return acc / len(self.res)


class Decoder(nn.Module):
    def __init__(self, cfg: GeneratorConfig):
        super().__init__()
        self.latent_proj = nn.Conv1d(cfg.latent_dim, cfg.decoder_channels, 1)
        self.stages = nn.ModuleList(
            DecoderStage(cfg.decoder_channels // 2**i, rate, cfg)
            for i, rate in enumerate(cfg.upsample_rates)
        )
        bottom = cfg.decoder_channels // 2 ** len(cfg.upsample_rates)
        self.output = _same_conv(bottom, 1, cfg.output_kernel)

    def forward(self, latent: Tensor) -> Tensor:
        h = self.latent_proj(latent)
        for stage in self.stages:
            h = stage(h)
        return torch.tanh(self.output(F.leaky_relu(h, LRELU_SLOPE)))


class Generator(nn.Module):
    """Encoder -> quantizer -> decoder over (batch, samples) waveforms."""

    def __init__(self, cfg: GeneratorConfig):
        super().__init__()
        self.cfg = cfg
        self.encoder = Encoder(cfg)
        self.quantizer = FsqLayer(cfg.num_codebooks, cfg.levels)
        self.decoder = Decoder(cfg)

    def set_quantizer_bypass(self, bypass: bool) -> None:
        self.quantizer.bypass = bypass

    def forward(self, audio: Tensor) -> Tensor:
        if audio.shape[-1] % self.cfg.total_stride:
            raise ValueError("input length must be a multiple of the total stride")
        latent = self.encoder(audio.unsqueeze(1))
        quantized = self.quantizer(latent)
        return self.decoder(quantized).squeeze(1)

    def export_tensors(self) -> dict[str, torch.Tensor]:
        """Weights under the runtime's canonical names, in registry order."""
        out: dict[str, torch.Tensor] = {}

        def put(name, module):
            out[f"{name}.weight"] = module.weight.detach()
            out[f"{name}.bias"] = module.bias.detach()

        put("encoder.input", self.encoder.input)
        for i, block in enumerate(self.encoder.blocks):
            for j, layer in enumerate(block.res):
                put(f"encoder.block{i}.res{j}.conv1", layer.conv1)
                put(f"encoder.block{i}.res{j}.conv2", layer.conv2)
            put(f"encoder.block{i}.down", block.down)
        put("encoder.latent_proj", self.encoder.latent_proj)
        put("decoder.latent_proj", self.decoder.latent_proj)
        for i, stage in enumerate(self.decoder.stages):
            put(f"decoder.stage{i}.up", stage.up)
            for k, branch in enumerate(stage.res):
                for j, layer in enumerate(branch):
                    put(f"decoder.stage{i}.res{k}_{j}.conv1", layer.conv1)
                    put(f"decoder.stage{i}.res{k}_{j}.conv2", layer.conv2)
        put("decoder.output", self.decoder.output)
        return out
