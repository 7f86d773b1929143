import numpy as np
import pytest

from gammacwt import (
    Signal,
    ValidationError,
    VowelSpec,
    builtin_vowel,
    impulse_train,
    resonator_cascade,
    synthesize_vowel,
)
from gammacwt.analysis import detect_peaks
from gammacwt.cwt import log_spectrum
from gammacwt.errors import ConfigurationError
from gammacwt.synth import _resonator_coeffs

FS = 16000.0

TABLE = {
    "a": (100.0, (730.0, 1090.0, 2440.0)),
    "i": (100.0, (270.0, 2290.0, 3010.0)),
    "u": (100.0, (300.0, 870.0, 2240.0)),
}


@pytest.mark.parametrize("label", sorted(TABLE))
def test_builtin_vowel_table(label):
    pitch, formants = TABLE[label]
    spec = builtin_vowel(label)
    assert spec.pitch == pitch
    assert spec.formants == formants


def test_builtin_vowel_unknown_label():
    with pytest.raises(ValidationError, match="vowel"):
        builtin_vowel("x")


def test_vowel_spec_ordering_enforced():
    with pytest.raises(ValidationError):
        VowelSpec(label="a", pitch=800.0, formants=(730.0, 1090.0, 2440.0))
    with pytest.raises(ValidationError):
        VowelSpec(label="a", pitch=100.0, formants=(730.0, 1090.0, 9000.0))


def test_impulse_train_positions():
    sig = impulse_train(100.0, 0.1, FS)
    positions = np.nonzero(sig.samples)[0]
    assert np.array_equal(positions, np.arange(10) * 160)
    assert sig.samples.sum() == len(positions)


def test_impulse_train_fractional_period():
    sig = impulse_train(94.0, 0.5, FS)
    positions = np.nonzero(sig.samples)[0]
    expected = np.round(np.arange(len(positions)) * FS / 94.0).astype(int)
    assert np.array_equal(positions, expected)


def test_impulse_train_harmonic_spectrum():
    sig = impulse_train(100.0, 0.5, FS)
    spec = log_spectrum(sig.samples, FS, 0)
    bin_hz = spec.freqs[1] - spec.freqs[0]
    mag = spec.log_magnitude
    for harmonic in (100.0, 500.0, 1300.0, 3000.0):
        window = (spec.freqs > harmonic - 50.0) & (spec.freqs < harmonic + 50.0)
        peak = spec.freqs[window][np.argmax(mag[window])]
        assert abs(peak - harmonic) <= bin_hz


def test_impulse_train_invalid_pitch():
    with pytest.raises(ValidationError):
        impulse_train(0.0, 0.1, FS)
    with pytest.raises(ValidationError):
        impulse_train(9000.0, 0.1, FS)


def test_resonator_poles_inside_unit_circle():
    for freq, bw in ((730.0, 60.0), (2440.0, 120.0), (3010.0, 120.0)):
        b, a = _resonator_coeffs(freq, bw, FS)
        radius = np.max(np.abs(np.roots(a)))
        assert radius < 1.0
        assert radius == pytest.approx(np.exp(-np.pi * bw / FS), rel=1e-12)


def test_resonator_cascade_zero_in_zero_out():
    spec = builtin_vowel("a")
    out = resonator_cascade(Signal(np.zeros(1000), FS), spec)
    assert np.all(out.samples == 0)


def test_resonator_cascade_rate_mismatch():
    spec = builtin_vowel("a")
    with pytest.raises(ConfigurationError):
        resonator_cascade(Signal(np.zeros(100), 8000.0), spec)


def test_output_bounded(vowel_signals):
    for _, sig in vowel_signals.values():
        assert np.max(np.abs(sig.samples)) <= 0.9 + 1e-12


@pytest.mark.parametrize("label", sorted(TABLE))
def test_envelope_peaks_near_formants(label, vowel_signals):
    spec, sig = vowel_signals[label]
    lspec = log_spectrum(sig.samples, FS, 0)
    peaks = detect_peaks(lspec)
    for formant in spec.formants:
        nearest = min(peaks, key=lambda p: abs(p[0] - formant))
        assert abs(nearest[0] - formant) <= 50.0


@pytest.mark.parametrize("label", sorted(TABLE))
def test_exactly_three_dominant_peaks_below_4k(label, vowel_signals):
    _, sig = vowel_signals[label]
    peaks = detect_peaks(log_spectrum(sig.samples, FS, 0))
    assert sum(1 for f, _ in peaks if f < 4000.0) == 3


@pytest.mark.parametrize("label", sorted(TABLE))
def test_spectral_peaks_sit_on_harmonics(label, vowel_signals):
    spec, sig = vowel_signals[label]
    lspec = log_spectrum(sig.samples, FS, 0)
    bin_hz = lspec.freqs[1] - lspec.freqs[0]
    for freq, _ in detect_peaks(lspec):
        nearest_harmonic = round(freq / spec.pitch) * spec.pitch
        assert abs(freq - nearest_harmonic) <= max(bin_hz, spec.pitch * 0.1)
