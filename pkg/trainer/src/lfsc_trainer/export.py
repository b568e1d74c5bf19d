"""Weight export in the runtime's binary format.

This is an independent writer for the documented format (magic "LFSW"),
not a wrapper around the runtime package: the runtime's loader validating
these files end-to-end is exactly the interface test we want.
"""

from __future__ import annotations

import struct
import zlib

import numpy as np

from .config import GeneratorConfig
from .generator import Generator

MAGIC = b"LFSW"
VERSION = 1
_DTYPE_F32 = 0


def _u16_list(values) -> bytes:
    return struct.pack("<B", len(values)) + struct.pack(f"<{len(values)}H", *values)


def _config_block(cfg: GeneratorConfig) -> bytes:
    parts = [
        struct.pack("<I", cfg.sample_rate),
        struct.pack("<B", cfg.num_codebooks),
        _u16_list(cfg.levels),
        struct.pack(
            "<HBBBB",
            cfg.encoder_channels,
            cfg.residual_layers_per_block,
            cfg.residual_kernel,
            cfg.dilation,
            cfg.input_kernel,
        ),
        _u16_list(cfg.strides),
        struct.pack("<HB", cfg.decoder_channels, cfg.output_kernel),
        _u16_list(cfg.upsample_rates),
        _u16_list(cfg.resblock_kernels),
        _u16_list(cfg.resblock_dilations),
    ]
    return b"".join(parts)


def weights_to_bytes(generator: Generator, cfg: GeneratorConfig) -> bytes:
    tensors = generator.export_tensors()
    parts = [_config_block(cfg), struct.pack("<I", len(tensors))]
    for name, tensor in tensors.items():
        data = np.ascontiguousarray(tensor.cpu().numpy(), dtype="<f4")
        encoded = name.encode("utf-8")
        parts.append(struct.pack("<H", len(encoded)))
        parts.append(encoded)
        parts.append(struct.pack("<B", data.ndim))
        parts.append(struct.pack(f"<{data.ndim}I", *data.shape))
        parts.append(struct.pack("<B", _DTYPE_F32))
        parts.append(data.tobytes())
    payload = b"".join(parts)
    checksum = zlib.crc32(payload) & 0xFFFFFFFF
    return MAGIC + struct.pack("<H", VERSION) + payload + struct.pack("<I", checksum)


def save_weights(generator: Generator, cfg: GeneratorConfig, path) -> None:
    with open(path, "wb") as fh:
        fh.write(weights_to_bytes(generator, cfg))
