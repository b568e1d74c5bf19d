"""Low frame-rate speech codec toolkit."""

from .audio import AudioBuffer, read_wav, write_wav
from .bitstream import (
    BitstreamHeader,
    bitrate,
    fps_display,
    kbps_display,
    pack,
    payload_size,
    token_rate,
    tokens_display,
    unpack,
)
from .config import DecoderConfig, EncoderConfig, ModelConfig, reduced_config, tensor_shapes
from .fsq import (
    CodeSequence,
    FsqSpec,
    LatentSequence,
    code_to_indices,
    dequantize_dim,
    dequantize_frames,
    indices_to_code,
    quantize_dim,
    quantize_frames,
)
from .metrics import (
    MetricReport,
    SpectralConfig,
    estimate_bandwidth,
    evaluate,
    meets_bandwidth,
    mel_distance,
    si_sdr,
    stft_distance,
)
from .model import decode, encode, frame_rate
from .weights import ModelWeights

__version__ = "0.1.0"
