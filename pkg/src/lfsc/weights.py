"""Weight container and its binary file format.

Layout (all integers little-endian):

    magic "LFSW" | u16 version
    config block: sample rate, quantizer levels, encoder/decoder geometry
    u32 tensor count
    per tensor: u16 name length | name (utf-8) | u8 rank | rank*u32 dims
                | u8 dtype tag (0 = float32) | raw little-endian float32 data
    u32 CRC-32 over everything between the version field and the checksum

The tensor set of a valid file matches ``config.tensor_shapes`` exactly,
in registry order, which makes save -> load -> save byte-identical.
"""

from __future__ import annotations

import io
import struct
import zlib
from dataclasses import dataclass

import numpy as np

from .config import DecoderConfig, EncoderConfig, ModelConfig, tensor_shapes
from .errors import FormatError, ValidationError
from .fsq import FsqSpec

MAGIC = b"LFSW"
VERSION = 1
_DTYPE_F32 = 0
FILE_EXTENSION = ".lfsw"


@dataclass
class ModelWeights:
    config: ModelConfig
    tensors: dict[str, np.ndarray]

    def __post_init__(self):
        expected = tensor_shapes(self.config)
        for name, shape in expected.items():
            if name not in self.tensors:
                raise ValidationError(f"missing tensor {name!r}")
            got = self.tensors[name]
            if tuple(got.shape) != shape:
                raise ValidationError(
                    f"tensor {name!r} has shape {tuple(got.shape)}, expected {shape}"
                )
        extra = set(self.tensors) - set(expected)
        if extra:
            raise ValidationError(f"unexpected tensors: {sorted(extra)}")
        self.tensors = {
            name: np.ascontiguousarray(self.tensors[name], dtype=np.float32)
            for name in expected
        }

    def parameter_count(self) -> tuple[int, int]:
        """Total element counts, partitioned into (encoder, decoder)."""
        return count_parameters(self.tensors)

    @classmethod
    def random(cls, config: ModelConfig, seed: int = 0, scale: float = 0.02) -> "ModelWeights":
        """Gaussian-initialized weights; enough for shape and format tests."""
        rng = np.random.default_rng(seed)
        tensors = {
            name: rng.normal(0.0, scale, size=shape).astype(np.float32)
            for name, shape in tensor_shapes(config).items()
        }
        return cls(config=config, tensors=tensors)

    def to_bytes(self) -> bytes:
        body = io.BytesIO()
        _write_config(body, self.config)
        names = list(tensor_shapes(self.config))
        body.write(struct.pack("<I", len(names)))
        for name in names:
            tensor = self.tensors[name]
            encoded = name.encode("utf-8")
            body.write(struct.pack("<H", len(encoded)))
            body.write(encoded)
            body.write(struct.pack("<B", tensor.ndim))
            body.write(struct.pack(f"<{tensor.ndim}I", *tensor.shape))
            body.write(struct.pack("<B", _DTYPE_F32))
            body.write(tensor.astype("<f4").tobytes())
        payload = body.getvalue()
        checksum = zlib.crc32(payload) & 0xFFFFFFFF
        return MAGIC + struct.pack("<H", VERSION) + payload + struct.pack("<I", checksum)

    def save(self, path) -> None:
        with open(path, "wb") as fh:
            fh.write(self.to_bytes())

    @classmethod
    def from_bytes(cls, data: bytes) -> "ModelWeights":
        if len(data) < 4 or data[:4] != MAGIC:
            raise FormatError("not a weight file (bad magic)")
        if len(data) < 10:
            raise ValidationError("weight file truncated before checksum")
        (version,) = struct.unpack_from("<H", data, 4)
        if version != VERSION:
            raise FormatError(f"unsupported weight format version {version}")
        payload, (stored,) = data[6:-4], struct.unpack("<I", data[-4:])
        if zlib.crc32(payload) & 0xFFFFFFFF != stored:
            raise ValidationError("weight file checksum mismatch")
        reader = _Reader(payload)
        try:
            config = _read_config(reader)
            (count,) = reader.unpack("<I")
            tensors: dict[str, np.ndarray] = {}
            for _ in range(count):
                (name_len,) = reader.unpack("<H")
                name = reader.take(name_len).decode("utf-8")
                (rank,) = reader.unpack("<B")
                dims = reader.unpack(f"<{rank}I")
                (dtype_tag,) = reader.unpack("<B")
                if dtype_tag != _DTYPE_F32:
                    raise ValidationError(f"tensor {name!r} has unknown dtype tag {dtype_tag}")
                n = int(np.prod(dims, dtype=np.int64)) if rank else 1
                raw = reader.take(4 * n)
                if name in tensors:
                    raise ValidationError(f"duplicate tensor {name!r}")
                tensors[name] = np.frombuffer(raw, dtype="<f4").reshape(dims).copy()
        except _Truncated as exc:
            raise ValidationError(f"weight file truncated: {exc}") from None
        if reader.remaining():
            raise ValidationError(f"{reader.remaining()} trailing bytes after tensors")
        return cls(config=config, tensors=tensors)

    @classmethod
    def load(cls, path) -> "ModelWeights":
        with open(path, "rb") as fh:
            return cls.from_bytes(fh.read())


def count_parameters(tensors: dict[str, np.ndarray]) -> tuple[int, int]:
    """Element counts partitioned by name prefix into (encoder, decoder)."""
    enc = sum(t.size for n, t in tensors.items() if n.startswith("encoder."))
    dec = sum(t.size for n, t in tensors.items() if n.startswith("decoder."))
    return enc, dec


class _Truncated(Exception):
    pass


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise _Truncated(f"wanted {n} bytes at offset {self.pos}")
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))

    def remaining(self) -> int:
        return len(self.data) - self.pos


def _write_u16_list(out, values) -> None:
    out.write(struct.pack("<B", len(values)))
    out.write(struct.pack(f"<{len(values)}H", *values))


def _read_u16_list(reader: _Reader) -> tuple[int, ...]:
    (n,) = reader.unpack("<B")
    return reader.unpack(f"<{n}H")


def _write_config(out, cfg: ModelConfig) -> None:
    out.write(struct.pack("<I", cfg.sample_rate))
    out.write(struct.pack("<B", cfg.fsq.num_codebooks))
    _write_u16_list(out, cfg.fsq.levels)
    enc = cfg.encoder
    out.write(
        struct.pack(
            "<HBBBB",
            enc.initial_channels,
            enc.residual_layers_per_block,
            enc.residual_kernel,
            enc.dilation,
            enc.input_kernel,
        )
    )
    _write_u16_list(out, enc.strides)
    dec = cfg.decoder
    out.write(struct.pack("<HB", dec.initial_channels, dec.output_kernel))
    _write_u16_list(out, dec.upsample_rates)
    _write_u16_list(out, dec.resblock_kernels)
    _write_u16_list(out, dec.resblock_dilations)


def _read_config(reader: _Reader) -> ModelConfig:
    (sample_rate,) = reader.unpack("<I")
    (num_codebooks,) = reader.unpack("<B")
    levels = _read_u16_list(reader)
    init_ch, res_layers, res_kernel, dilation, input_kernel = reader.unpack("<HBBBB")
    strides = _read_u16_list(reader)
    dec_init, output_kernel = reader.unpack("<HB")
    rates = _read_u16_list(reader)
    kernels = _read_u16_list(reader)
    dilations = _read_u16_list(reader)
    return ModelConfig(
        sample_rate=sample_rate,
        fsq=FsqSpec(num_codebooks=num_codebooks, levels=levels),
        encoder=EncoderConfig(
            strides=strides,
            residual_layers_per_block=res_layers,
            initial_channels=init_ch,
            residual_kernel=res_kernel,
            dilation=dilation,
            input_kernel=input_kernel,
        ),
        decoder=DecoderConfig(
            upsample_rates=rates,
            initial_channels=dec_init,
            resblock_kernels=kernels,
            resblock_dilations=dilations,
            output_kernel=output_kernel,
        ),
    )
