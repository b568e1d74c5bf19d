import numpy as np
import pytest

from lfsc import FsqSpec, ModelConfig, ModelWeights, reduced_config, tensor_shapes
from lfsc.config import DecoderConfig, EncoderConfig
from lfsc.errors import FormatError, ValidationError


@pytest.fixture(scope="module")
def weights():
    return ModelWeights.random(reduced_config(), seed=3)


class TestFormat:
    def test_save_load_save_byte_identity(self, weights, tmp_path):
        path = tmp_path / "model.lfsw"
        weights.save(path)
        first = path.read_bytes()
        ModelWeights.load(path).save(path)
        assert path.read_bytes() == first

    def test_minimal_one_block_config(self, tmp_path):
        cfg = ModelConfig(
            encoder=EncoderConfig(strides=(2,), initial_channels=2),
            decoder=DecoderConfig(upsample_rates=(2,), initial_channels=8),
        )
        w = ModelWeights.random(cfg, seed=0)
        path = tmp_path / "one_block.lfsw"
        w.save(path)
        loaded = ModelWeights.load(path)
        assert loaded.parameter_count() == w.parameter_count()
        assert loaded.config.total_stride == 2

    def test_config_survives_roundtrip(self, tmp_path):
        cfg = ModelConfig(
            sample_rate=16000,
            fsq=FsqSpec(num_codebooks=4, levels=(8, 5, 5, 5)),
            encoder=EncoderConfig(initial_channels=2),
            decoder=DecoderConfig(initial_channels=32),
        )
        w = ModelWeights.random(cfg, seed=0)
        path = tmp_path / "m.lfsw"
        w.save(path)
        loaded = ModelWeights.load(path)
        assert loaded.config == cfg
        for name in w.tensors:
            assert np.array_equal(loaded.tensors[name], w.tensors[name])

    def test_bad_magic(self, weights):
        data = bytearray(weights.to_bytes())
        data[:4] = b"WXYZ"
        with pytest.raises(FormatError):
            ModelWeights.from_bytes(bytes(data))

    def test_bad_version(self, weights):
        data = bytearray(weights.to_bytes())
        data[4:6] = (99).to_bytes(2, "little")
        with pytest.raises(FormatError):
            ModelWeights.from_bytes(bytes(data))

    def test_tampered_payload_fails_checksum(self, weights):
        data = bytearray(weights.to_bytes())
        data[len(data) // 2] ^= 0x40
        with pytest.raises(ValidationError, match="checksum"):
            ModelWeights.from_bytes(bytes(data))

    def test_tampered_checksum_field(self, weights):
        data = bytearray(weights.to_bytes())
        data[-1] ^= 0x01
        with pytest.raises(ValidationError, match="checksum"):
            ModelWeights.from_bytes(bytes(data))

    def test_truncated_rejected(self, weights):
        data = weights.to_bytes()
        for cut in (5, 9, len(data) // 3, len(data) - 1):
            with pytest.raises((ValidationError, FormatError)):
                ModelWeights.from_bytes(data[:cut])

    def test_no_partial_model_on_truncation(self, weights):
        # strip one tensor's worth of bytes then re-checksum: parsing must
        # still fail rather than return a model missing tensors
        import struct
        import zlib

        data = weights.to_bytes()
        payload = data[6:-4]
        shorter = payload[:-1000]
        fixed = data[:6] + shorter + struct.pack("<I", zlib.crc32(shorter) & 0xFFFFFFFF)
        with pytest.raises(ValidationError):
            ModelWeights.from_bytes(fixed)


class TestValidation:
    def test_missing_tensor_named(self):
        cfg = reduced_config()
        tensors = {
            name: np.zeros(shape, dtype=np.float32)
            for name, shape in tensor_shapes(cfg).items()
        }
        del tensors["decoder.output.bias"]
        with pytest.raises(ValidationError, match="decoder.output.bias"):
            ModelWeights(cfg, tensors)

    def test_wrong_shape_named(self):
        cfg = reduced_config()
        tensors = {
            name: np.zeros(shape, dtype=np.float32)
            for name, shape in tensor_shapes(cfg).items()
        }
        tensors["encoder.input.weight"] = np.zeros((1, 1, 1), dtype=np.float32)
        with pytest.raises(ValidationError, match="encoder.input.weight"):
            ModelWeights(cfg, tensors)

    def test_extra_tensor_rejected(self):
        cfg = reduced_config()
        tensors = {
            name: np.zeros(shape, dtype=np.float32)
            for name, shape in tensor_shapes(cfg).items()
        }
        tensors["encoder.rogue.weight"] = np.zeros(3, dtype=np.float32)
        with pytest.raises(ValidationError, match="rogue"):
            ModelWeights(cfg, tensors)

    def test_registry_covers_both_halves(self):
        shapes = tensor_shapes(reduced_config())
        assert any(n.startswith("encoder.") for n in shapes)
        assert any(n.startswith("decoder.") for n in shapes)
        assert all(n.startswith(("encoder.", "decoder.")) for n in shapes)
