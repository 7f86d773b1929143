import numpy as np
import pytest

from gammacwt import (
    DEFAULT_GAMMACHIRP,
    Gammachirp,
    ScaleLadder,
    builtin_vowel,
    compare_families,
    normalize,
    synthesize_vowel,
)

SAMPLE_RATE = 16000.0


@pytest.fixture(scope="session")
def default_family():
    return Gammachirp(normalize(DEFAULT_GAMMACHIRP))


@pytest.fixture(scope="session")
def default_ladder():
    return ScaleLadder()


@pytest.fixture(scope="session")
def vowel_signals():
    out = {}
    for label in "aiu":
        spec = builtin_vowel(label)
        out[label] = (spec, synthesize_vowel(spec))
    return out


@pytest.fixture(scope="session")
def comparisons(default_ladder):
    return {label: compare_families(builtin_vowel(label), default_ladder) for label in "aiu"}


def tone(freq, duration=0.5, sample_rate=SAMPLE_RATE, amplitude=1.0):
    t = np.arange(int(duration * sample_rate)) / sample_rate
    return amplitude * np.sin(2.0 * np.pi * freq * t)
