"""Differentiable finite scalar quantization with a straight-through surrogate.

Forward: tanh-bound each dimension, round half up onto its level grid and
rescale to [-1, 1]. Backward: rounding contributes identity, so the
gradient is that of the tanh bound alone.
"""

from __future__ import annotations

import torch
from torch import Tensor, nn


def round_half_up(x: Tensor) -> Tensor:
    return torch.floor(x + 0.5)


class FsqLayer(nn.Module):
    """Quantizes (batch, latent_dim, frames); `bypass` skips quantization."""

    def __init__(self, num_codebooks: int, levels: tuple[int, ...]):
        super().__init__()
        self.num_codebooks = num_codebooks
        self.levels = tuple(levels)
        self.register_buffer(
            "level_tensor",
            torch.tensor(list(levels), dtype=torch.float32).repeat(num_codebooks),
            persistent=False,
        )
        self.bypass = False

    def forward(self, z: Tensor) -> Tensor:
        if self.bypass:
            return z
        levels = self.level_tensor.view(1, -1, 1)
        bounded = torch.tanh(z)
        half = 0.5 * (levels - 1.0)
        index = round_half_up(half * bounded + half)
        grid = (2.0 * index - (levels - 1.0)) / (levels - 1.0)
        # straight-through: forward the grid value, backpropagate tanh
        return bounded + (grid - bounded).detach()
