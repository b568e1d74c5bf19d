import json
import sys
import wave

import numpy as np
import pytest

from lfsc import FsqSpec, ModelConfig, ModelWeights, reduced_config
from lfsc.cli import main
from lfsc.config import DecoderConfig, EncoderConfig


@pytest.fixture(scope="module")
def model_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("model") / "small.lfsw"
    ModelWeights.random(reduced_config(), seed=7).save(path)
    return str(path)


@pytest.fixture(scope="module")
def wav_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("audio") / "tone.wav"
    t = np.arange(22050) / 22050
    write_wav_file(path, 0.5 * np.sin(2 * np.pi * 440 * t), 22050)
    return str(path)


def write_wav_file(path, samples, rate, channels=1):
    pcm = np.round(np.clip(samples, -1, 1) * 32767).astype("<i2")
    if channels == 2:
        pcm = np.column_stack([pcm, pcm]).reshape(-1)
    with wave.open(str(path), "wb") as fh:
        fh.setnchannels(channels)
        fh.setsampwidth(2)
        fh.setframerate(rate)
        fh.writeframes(pcm.tobytes())


def run_json(argv, capsys):
    code = main(argv + ["--json"])
    out = capsys.readouterr().out
    return code, json.loads(out) if out else None


class TestEncode:
    def test_one_second_tone(self, model_path, wav_path, tmp_path, capsys):
        out = str(tmp_path / "tone.lfsc")
        code, report = run_json(
            ["encode", "--model", model_path, "--input", wav_path, "--output", out], capsys
        )
        assert code == 0
        assert report["frames"] == 22
        assert report["tokens"] == 176
        assert report["payload_bytes"] == 242
        assert report["kbps_nominal"] == 1.89

    def test_stereo_rejected(self, model_path, tmp_path, capsys):
        stereo = tmp_path / "stereo.wav"
        write_wav_file(stereo, np.zeros(1000), 22050, channels=2)
        code = main(
            ["encode", "--model", model_path, "--input", str(stereo), "--output", str(tmp_path / "x.lfsc")]
        )
        assert code == 2
        assert capsys.readouterr().err.startswith("error:")

    def test_empty_wav_rejected(self, model_path, tmp_path, capsys):
        empty = tmp_path / "empty.wav"
        write_wav_file(empty, np.zeros(0), 22050)
        code = main(
            ["encode", "--model", model_path, "--input", str(empty), "--output", str(tmp_path / "x.lfsc")]
        )
        assert code == 2

    def test_wrong_rate_rejected(self, model_path, tmp_path, capsys):
        wav = tmp_path / "lo.wav"
        write_wav_file(wav, np.zeros(1000), 16000)
        code = main(
            ["encode", "--model", model_path, "--input", str(wav), "--output", str(tmp_path / "x.lfsc")]
        )
        assert code == 2

    def test_unreadable_model(self, wav_path, tmp_path, capsys):
        code = main(
            ["encode", "--model", str(tmp_path / "missing.lfsw"), "--input", wav_path, "--output", str(tmp_path / "x.lfsc")]
        )
        assert code == 3

    def test_garbage_model(self, wav_path, tmp_path, capsys):
        bad = tmp_path / "bad.lfsw"
        bad.write_bytes(b"not a model at all")
        code = main(
            ["encode", "--model", str(bad), "--input", wav_path, "--output", str(tmp_path / "x.lfsc")]
        )
        assert code == 3

    def test_override_mismatch(self, model_path, wav_path, tmp_path, capsys):
        code = main(
            ["encode", "--model", model_path, "--input", wav_path,
             "--output", str(tmp_path / "x.lfsc"), "--levels", "8,5,5,5"]
        )
        assert code == 2

    def test_override_match_accepted(self, model_path, wav_path, tmp_path, capsys):
        code = main(
            ["encode", "--model", model_path, "--input", wav_path,
             "--output", str(tmp_path / "x.lfsc"), "--levels", "8,7,6,6", "--codebooks", "8"]
        )
        assert code == 0


class TestDecode:
    def test_roundtrip_length(self, model_path, wav_path, tmp_path, capsys):
        lfsc_path = str(tmp_path / "a.lfsc")
        out_wav = str(tmp_path / "out.wav")
        assert main(["encode", "--model", model_path, "--input", wav_path, "--output", lfsc_path]) == 0
        capsys.readouterr()
        code, report = run_json(
            ["decode", "--model", model_path, "--input", lfsc_path, "--output", out_wav], capsys
        )
        assert code == 0
        assert report["samples"] == 22050
        with wave.open(out_wav, "rb") as fh:
            assert fh.getnframes() == 22050
            assert fh.getframerate() == 22050
            assert fh.getnchannels() == 1

    def test_foreign_levels_exit_4(self, model_path, wav_path, tmp_path, capsys):
        other_cfg = ModelConfig(
            fsq=FsqSpec(levels=(8, 5, 5, 5)),
            encoder=EncoderConfig(initial_channels=4),
            decoder=DecoderConfig(initial_channels=64),
        )
        other_model = tmp_path / "other.lfsw"
        ModelWeights.random(other_cfg, seed=1).save(other_model)
        lfsc_path = str(tmp_path / "b.lfsc")
        assert main(["encode", "--model", str(other_model), "--input", wav_path, "--output", lfsc_path]) == 0
        code = main(["decode", "--model", model_path, "--input", lfsc_path, "--output", str(tmp_path / "o.wav")])
        assert code == 4

    def test_truncated_exit_5(self, model_path, wav_path, tmp_path, capsys):
        lfsc_path = tmp_path / "c.lfsc"
        assert main(["encode", "--model", model_path, "--input", wav_path, "--output", str(lfsc_path)]) == 0
        data = lfsc_path.read_bytes()
        lfsc_path.write_bytes(data[:-5])
        code = main(["decode", "--model", model_path, "--input", str(lfsc_path), "--output", str(tmp_path / "o.wav")])
        assert code == 5

    def test_corrupt_payload_exit_5(self, model_path, wav_path, tmp_path, capsys):
        lfsc_path = tmp_path / "d.lfsc"
        assert main(["encode", "--model", model_path, "--input", wav_path, "--output", str(lfsc_path)]) == 0
        data = bytearray(lfsc_path.read_bytes())
        data[-242] = 0xFF
        data[-241] |= 0xE0
        lfsc_path.write_bytes(bytes(data))
        code = main(["decode", "--model", model_path, "--input", str(lfsc_path), "--output", str(tmp_path / "o.wav")])
        assert code == 5


class TestInfo:
    def test_bitstream_info(self, model_path, wav_path, tmp_path, capsys):
        lfsc_path = str(tmp_path / "e.lfsc")
        assert main(["encode", "--model", model_path, "--input", wav_path, "--output", lfsc_path]) == 0
        capsys.readouterr()
        code, report = run_json(["info", "--input", lfsc_path], capsys)
        assert code == 0
        assert report["type"] == "bitstream"
        assert report["frames_per_second"] == 21.53
        assert report["tokens_per_second"] == 172.27
        assert report["kbps"] == 1.89
        assert report["num_frames"] == 22
        assert report["original_length"] == 22050
        assert report["payload_ok"] is True

    def test_weight_info(self, model_path, capsys):
        code, report = run_json(["info", "--input", model_path], capsys)
        assert code == 0
        assert report["type"] == "weights"
        enc, dec = ModelWeights.load(model_path).parameter_count()
        assert report["encoder_parameters"] == enc
        assert report["decoder_parameters"] == dec
        assert report["total_parameters"] == enc + dec

    def test_unknown_magic_exit_2(self, tmp_path, capsys):
        junk = tmp_path / "junk.bin"
        junk.write_bytes(b"\x00\x01\x02\x03 garbage")
        assert main(["info", "--input", str(junk)]) == 2

    def test_missing_file_exit_2(self, tmp_path, capsys):
        assert main(["info", "--input", str(tmp_path / "absent")]) == 2


class TestEval:
    def test_identical_files(self, wav_path, capsys):
        code, report = run_json(["eval", wav_path, wav_path], capsys)
        assert code == 0
        assert report["si_sdr"] == 100.0
        assert report["mel_dist"] == 0.0
        assert report["stft_dist"] == 0.0

    def test_noisy_pair_matches_library(self, wav_path, tmp_path, capsys):
        from lfsc import read_wav, si_sdr

        ref = read_wav(wav_path)
        rng = np.random.default_rng(5)
        noisy = ref.samples + 0.01 * rng.normal(size=len(ref))
        deg_path = tmp_path / "deg.wav"
        write_wav_file(deg_path, noisy, 22050)
        code, report = run_json(["eval", wav_path, str(deg_path), "--metrics", "si_sdr"], capsys)
        assert code == 0
        expected = si_sdr(ref, read_wav(str(deg_path)))
        assert report["si_sdr"] == pytest.approx(expected, abs=1e-3)

    def test_rate_mismatch_exit_2(self, wav_path, tmp_path, capsys):
        other = tmp_path / "other_rate.wav"
        write_wav_file(other, np.zeros(22050), 16000)
        assert main(["eval", wav_path, str(other)]) == 2

    def test_length_mismatch_requires_trim(self, wav_path, tmp_path, capsys):
        shorter = tmp_path / "short.wav"
        write_wav_file(shorter, np.ones(11025) * 0.1, 22050)
        assert main(["eval", wav_path, str(shorter)]) == 2
        assert main(["eval", wav_path, str(shorter), "--trim"]) == 0

    def test_unknown_metric_exit_2(self, wav_path, capsys):
        assert main(["eval", wav_path, wav_path, "--metrics", "pesq"]) == 2

    def test_external_scores_merged_into_report(self, wav_path, capsys):
        code, report = run_json(
            ["eval", wav_path, wav_path, "--metrics", "si_sdr",
             "--extra", "squim_mos=4.43", "--extra", "cer=2.09"], capsys
        )
        assert code == 0
        assert report["squim_mos"] == 4.43
        assert report["cer"] == 2.09
        assert report["si_sdr"] == 100.0

    def test_malformed_extra_exit_2(self, wav_path, capsys):
        assert main(["eval", wav_path, wav_path, "--extra", "nonsense"]) == 2


class TestRate:
    def test_default_table_row(self, capsys):
        code, report = run_json(["rate"], capsys)
        assert code == 0
        assert report["kbps_display"] == 1.89
        assert report["tokens_per_second_display"] == 172
        assert report["frames_per_second_display"] == 21.5
        assert report["code_bit_width"] == 11

    def test_cross_rows(self, capsys):
        code, report = run_json(
            ["rate", "--codebooks", "9", "--sample-rate", "44100", "--stride", "512"], capsys
        )
        assert code == 0
        assert report["tokens_per_second_display"] == 774

    def test_bad_levels_exit_2(self, capsys):
        assert main(["rate", "--levels", "8,x,6"]) == 2

    def test_json_keys_stable(self, capsys):
        _, first = run_json(["rate"], capsys)
        _, second = run_json(["rate", "--levels", "8,5,5,5"], capsys)
        assert list(first) == list(second)


def test_module_entrypoint_runs(tmp_path):
    import subprocess

    proc = subprocess.run(
        [sys.executable, "-m", "lfsc", "rate", "--json"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["kbps_display"] == 1.89
