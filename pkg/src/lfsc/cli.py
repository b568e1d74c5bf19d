"""Command-line tool: encode, decode, info, eval, rate.

Failure paths print a single `error: ...` line to stderr and exit with a
documented code (see README); success paths exit 0. `--json` switches the
report to a schema-stable JSON object on stdout.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bitstream as bs
from . import metrics as mx
from .audio import AudioBuffer, read_wav, write_wav
from .errors import (
    CodecError,
    CorruptionError,
    FormatError,
    InvalidCodeError,
    InvalidInputError,
    TruncationError,
)
from .fsq import FsqSpec
from .model import decode as model_decode
from .model import encode as model_encode
from .model import frame_rate
from .weights import MAGIC as WEIGHTS_MAGIC
from .weights import ModelWeights

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_BAD_INPUT = 2
EXIT_BAD_MODEL = 3
EXIT_SPEC_MISMATCH = 4
EXIT_CORRUPT = 5


def _fail(code: int, message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _emit(report: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(report))
    else:
        for key, value in report.items():
            print(f"{key}: {value}")


def _parse_levels(text: str) -> tuple[int, ...]:
    try:
        levels = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise InvalidInputError(f"cannot parse levels {text!r}") from None
    return levels


def _load_model(path: str) -> ModelWeights:
    try:
        return ModelWeights.load(path)
    except OSError as exc:
        raise FormatError(f"cannot read model file: {exc}") from None


def _check_overrides(args, spec: FsqSpec) -> None:
    if args.levels is not None and _parse_levels(args.levels) != spec.levels:
        raise InvalidInputError(
            f"--levels {args.levels} does not match model levels {','.join(map(str, spec.levels))}"
        )
    if args.codebooks is not None and args.codebooks != spec.num_codebooks:
        raise InvalidInputError(
            f"--codebooks {args.codebooks} does not match model ({spec.num_codebooks})"
        )


def cmd_encode(args) -> int:
    try:
        weights = _load_model(args.model)
    except CodecError as exc:
        return _fail(EXIT_BAD_MODEL, str(exc))
    try:
        audio = read_wav(args.input)
        _check_overrides(args, weights.config.fsq)
        codes = model_encode(audio, weights)
    except OSError as exc:
        return _fail(EXIT_BAD_INPUT, f"cannot read input: {exc}")
    except CodecError as exc:
        return _fail(EXIT_BAD_INPUT, str(exc))
    data = bs.pack(
        codes,
        sample_rate=weights.config.sample_rate,
        total_stride=weights.config.total_stride,
        original_length=len(audio),
    )
    with open(args.output, "wb") as fh:
        fh.write(data)
    spec = weights.config.fsq
    payload_bytes = bs.payload_size(codes.num_frames, spec)
    report = {
        "frames": codes.num_frames,
        "tokens": codes.num_frames * spec.num_codebooks,
        "payload_bytes": payload_bytes,
        "file_bytes": len(data),
        "kbps_effective": round(payload_bytes * 8 / audio.duration / 1000, 3),
        "kbps_nominal": bs.kbps_display(spec, weights.config.sample_rate, weights.config.total_stride),
    }
    _emit(report, args.json)
    return EXIT_OK


def cmd_decode(args) -> int:
    try:
        weights = _load_model(args.model)
    except CodecError as exc:
        return _fail(EXIT_BAD_MODEL, str(exc))
    try:
        with open(args.input, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        return _fail(EXIT_CORRUPT, f"cannot read bitstream: {exc}")
    try:
        header, codes = bs.unpack(data)
    except (FormatError, TruncationError, CorruptionError, InvalidInputError) as exc:
        return _fail(EXIT_CORRUPT, str(exc))
    model_spec = weights.config.fsq
    if (
        header.spec != model_spec
        or header.sample_rate != weights.config.sample_rate
        or header.total_stride != weights.config.total_stride
    ):
        return _fail(
            EXIT_SPEC_MISMATCH,
            f"bitstream spec (rate {header.sample_rate}, stride {header.total_stride}, "
            f"levels {header.levels}) does not match the model",
        )
    try:
        audio = model_decode(codes, weights, original_length=header.original_length)
    except InvalidCodeError as exc:
        return _fail(EXIT_CORRUPT, str(exc))
    write_wav(args.output, audio)
    report = {
        "frames": codes.num_frames,
        "samples": len(audio),
        "sample_rate": audio.sample_rate,
        "seconds": round(audio.duration, 6),
    }
    _emit(report, args.json)
    return EXIT_OK


def _bitstream_info(data: bytes) -> dict:
    header, offset = bs.read_header(data)
    spec = header.spec
    expected = bs.payload_size(header.num_frames, spec)
    got = len(data) - offset
    info = {
        "type": "bitstream",
        "sample_rate": header.sample_rate,
        "total_stride": header.total_stride,
        "num_codebooks": header.num_codebooks,
        "levels": list(header.levels),
        "codes_per_codebook": spec.codes_per_codebook,
        "code_bit_width": spec.code_bit_width,
        "num_frames": header.num_frames,
        "original_length": header.original_length,
        "payload_bytes": expected,
        "payload_ok": got == expected,
        "frames_per_second": round(frame_rate(header.sample_rate, header.total_stride), 2),
        "tokens_per_second": round(
            bs.token_rate(spec, header.sample_rate, header.total_stride), 2
        ),
        "bits_per_second": round(bs.bitrate(spec, header.sample_rate, header.total_stride), 2),
        "kbps": bs.kbps_display(spec, header.sample_rate, header.total_stride),
    }
    return info


def _weights_info(path: str) -> dict:
    weights = ModelWeights.load(path)
    cfg = weights.config
    enc, dec = weights.parameter_count()
    return {
        "type": "weights",
        "sample_rate": cfg.sample_rate,
        "total_stride": cfg.total_stride,
        "num_codebooks": cfg.fsq.num_codebooks,
        "levels": list(cfg.fsq.levels),
        "codes_per_codebook": cfg.fsq.codes_per_codebook,
        "encoder_parameters": enc,
        "decoder_parameters": dec,
        "total_parameters": enc + dec,
        "frames_per_second": round(cfg.frame_rate, 2),
        "kbps": bs.kbps_display(cfg.fsq, cfg.sample_rate, cfg.total_stride),
    }


def cmd_info(args) -> int:
    try:
        with open(args.input, "rb") as fh:
            head = fh.read(4)
    except OSError as exc:
        return _fail(EXIT_BAD_INPUT, f"cannot read file: {exc}")
    try:
        if head == bs.MAGIC:
            with open(args.input, "rb") as fh:
                report = _bitstream_info(fh.read())
        elif head == WEIGHTS_MAGIC:
            report = _weights_info(args.input)
        else:
            return _fail(EXIT_BAD_INPUT, f"unknown magic {head!r}")
    except CodecError as exc:
        return _fail(EXIT_BAD_INPUT, str(exc))
    _emit(report, args.json)
    return EXIT_OK


METRIC_NAMES = ("si_sdr", "mel_dist", "stft_dist", "bandwidth")


def cmd_eval(args) -> int:
    try:
        ref = read_wav(args.reference)
        deg = read_wav(args.degraded)
    except OSError as exc:
        return _fail(EXIT_BAD_INPUT, f"cannot read input: {exc}")
    except CodecError as exc:
        return _fail(EXIT_BAD_INPUT, str(exc))
    if ref.sample_rate != deg.sample_rate:
        return _fail(
            EXIT_BAD_INPUT,
            f"sample rate mismatch: {ref.sample_rate} vs {deg.sample_rate}",
        )
    if args.trim:
        n = min(len(ref), len(deg))
        ref = AudioBuffer(ref.samples[:n], ref.sample_rate)
        deg = AudioBuffer(deg.samples[:n], deg.sample_rate)
    selected = METRIC_NAMES if args.metrics is None else tuple(args.metrics.split(","))
    unknown = set(selected) - set(METRIC_NAMES)
    if unknown:
        return _fail(EXIT_BAD_INPUT, f"unknown metrics: {sorted(unknown)}")
    report: dict = {}
    for item in args.extra or ():
        if "=" not in item:
            return _fail(EXIT_BAD_INPUT, f"--extra wants key=value, got {item!r}")
        key, value = item.split("=", 1)
        try:
            report[key] = float(value)
        except ValueError:
            report[key] = value
    try:
        if "si_sdr" in selected:
            report["si_sdr"] = round(mx.si_sdr(ref, deg), 4)
        if "mel_dist" in selected:
            report["mel_dist"] = round(mx.mel_distance(ref, deg), 6)
        if "stft_dist" in selected:
            report["stft_dist"] = round(mx.stft_distance(ref, deg), 6)
        if "bandwidth" in selected:
            report["bandwidth"] = round(mx.estimate_bandwidth(deg), 1)
    except CodecError as exc:
        return _fail(EXIT_BAD_INPUT, str(exc))
    _emit(report, args.json)
    return EXIT_OK


def cmd_rate(args) -> int:
    try:
        levels = _parse_levels(args.levels) if args.levels else FsqSpec().levels
        codebooks = args.codebooks if args.codebooks is not None else 8
        spec = FsqSpec(num_codebooks=codebooks, levels=levels)
        fps = frame_rate(args.sample_rate, args.stride)
        report = {
            "levels": list(spec.levels),
            "num_codebooks": spec.num_codebooks,
            "codes_per_codebook": spec.codes_per_codebook,
            "code_bit_width": spec.code_bit_width,
            "sample_rate": args.sample_rate,
            "total_stride": args.stride,
            "frames_per_second": round(fps, 4),
            "frames_per_second_display": bs.fps_display(args.sample_rate, args.stride),
            "tokens_per_second": round(bs.token_rate(spec, args.sample_rate, args.stride), 4),
            "tokens_per_second_display": bs.tokens_display(
                spec.num_codebooks, args.sample_rate, args.stride
            ),
            "bits_per_second": round(bs.bitrate(spec, args.sample_rate, args.stride), 4),
            "kbps_display": bs.kbps_display(spec, args.sample_rate, args.stride),
        }
    except CodecError as exc:
        return _fail(EXIT_BAD_INPUT, str(exc))
    _emit(report, args.json)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lfsc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    enc = sub.add_parser("encode", help="compress a WAV file into a bitstream")
    enc.add_argument("--model", required=True, help="weight file")
    enc.add_argument("--input", required=True, help="mono 16-bit PCM WAV at the model rate")
    enc.add_argument("--output", required=True, help="bitstream file to write")
    enc.add_argument("--levels", help="expected quantizer levels, e.g. 8,7,6,6")
    enc.add_argument("--codebooks", type=int, help="expected codebook count")
    enc.add_argument("--json", action="store_true")
    enc.set_defaults(func=cmd_encode)

    dec = sub.add_parser("decode", help="reconstruct audio from a bitstream")
    dec.add_argument("--model", required=True)
    dec.add_argument("--input", required=True, help="bitstream file")
    dec.add_argument("--output", required=True, help="WAV file to write")
    dec.add_argument("--json", action="store_true")
    dec.set_defaults(func=cmd_decode)

    nfo = sub.add_parser("info", help="describe a bitstream or weight file")
    nfo.add_argument("--input", required=True)
    nfo.add_argument("--json", action="store_true")
    nfo.set_defaults(func=cmd_info)

    ev = sub.add_parser("eval", help="objective metrics between two WAV files")
    ev.add_argument("reference")
    ev.add_argument("degraded")
    ev.add_argument("--metrics", help=f"comma list from {','.join(METRIC_NAMES)}")
    ev.add_argument("--trim", action="store_true", help="trim both to the shorter length")
    ev.add_argument(
        "--extra",
        action="append",
        metavar="KEY=VALUE",
        help="externally produced score to include in the report (repeatable)",
    )
    ev.add_argument("--json", action="store_true")
    ev.set_defaults(func=cmd_eval)

    rate = sub.add_parser("rate", help="rate arithmetic for a quantizer configuration")
    rate.add_argument("--levels", help="quantizer levels, e.g. 8,7,6,6")
    rate.add_argument("--codebooks", type=int)
    rate.add_argument("--sample-rate", type=int, default=22050)
    rate.add_argument("--stride", type=int, default=1024)
    rate.add_argument("--json", action="store_true")
    rate.set_defaults(func=cmd_rate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CodecError as exc:
        return _fail(EXIT_BAD_INPUT, str(exc))
    except OSError as exc:
        return _fail(EXIT_UNEXPECTED, str(exc))


def entry() -> None:
    sys.exit(main())
