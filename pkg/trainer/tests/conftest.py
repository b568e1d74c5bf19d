import sys
import wave
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "scripts"))

from make_toy_corpus import synth_clip


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory):
    directory = tmp_path_factory.mktemp("corpus")
    rng = np.random.default_rng(0)
    for i in range(50):
        pcm = np.round(synth_clip(rng, 1.5, 22050) * 32767).astype("<i2")
        with wave.open(str(directory / f"clip{i:03d}.wav"), "wb") as fh:
            fh.setnchannels(1)
            fh.setsampwidth(2)
            fh.setframerate(22050)
            fh.writeframes(pcm.tobytes())
    return directory
