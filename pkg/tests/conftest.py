import numpy as np
import pytest

from lfsc import AudioBuffer, ModelWeights, reduced_config


@pytest.fixture(scope="session")
def small_weights():
    return ModelWeights.random(reduced_config(), seed=7)


@pytest.fixture()
def tone():
    def make(freq_hz=440.0, seconds=1.0, rate=22050, amplitude=0.5):
        t = np.arange(int(round(seconds * rate))) / rate
        return AudioBuffer(amplitude * np.sin(2 * np.pi * freq_hz * t), rate)

    return make
