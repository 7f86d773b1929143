"""Source-filter vowel synthesis.

A pitch-periodic impulse train is passed through a cascade of three
two-pole resonators placed at the vowel's first three formants.  The
resonator radius is exp(-pi * bandwidth / sample_rate), which keeps every
pole strictly inside the unit circle for positive bandwidths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.signal import lfilter

from .cwt import Signal
from .errors import ConfigurationError, ValidationError

__all__ = [
    "VowelSpec",
    "builtin_vowel",
    "impulse_train",
    "resonator_cascade",
    "synthesize_vowel",
    "VOWEL_TABLE",
]

# label -> (pitch Hz, (F1, F2, F3) Hz)
VOWEL_TABLE = {
    "a": (100.0, (730.0, 1090.0, 2440.0)),
    "i": (100.0, (270.0, 2290.0, 3010.0)),
    "u": (100.0, (300.0, 870.0, 2240.0)),
}

DEFAULT_BANDWIDTHS = (60.0, 90.0, 120.0)
DEFAULT_DURATION = 0.5
DEFAULT_SAMPLE_RATE = 16000.0
OUTPUT_PEAK = 0.9


@dataclass(frozen=True)
class VowelSpec:
    """Synthesis recipe for one vowel."""

    label: str
    pitch: float
    formants: tuple[float, float, float]
    bandwidths: tuple[float, float, float] = DEFAULT_BANDWIDTHS
    duration: float = DEFAULT_DURATION
    sample_rate: float = DEFAULT_SAMPLE_RATE

    def __post_init__(self):
        f1, f2, f3 = self.formants
        if not 0 < self.pitch < f1 < f2 < f3 < self.sample_rate / 2.0:
            raise ValidationError(
                "VowelSpec: need 0 < pitch < F1 < F2 < F3 < sample_rate/2, got "
                f"pitch={self.pitch}, formants={self.formants}, rate={self.sample_rate}"
            )
        if any(b <= 0 for b in self.bandwidths):
            raise ValidationError("VowelSpec.bandwidths: must be > 0")
        if self.duration <= 0:
            raise ValidationError("VowelSpec.duration: must be > 0")


def builtin_vowel(label: str, **overrides) -> VowelSpec:
    """Vowel recipe for /a/, /i/ or /u/ with the standard pitch and
    formant frequencies; keyword overrides replace any VowelSpec field."""
    if label not in VOWEL_TABLE:
        raise ValidationError(
            f"vowel: unknown label {label!r} (expected one of {sorted(VOWEL_TABLE)})"
        )
    pitch, formants = VOWEL_TABLE[label]
    spec = VowelSpec(label=label, pitch=pitch, formants=formants)
    return replace(spec, **overrides) if overrides else spec


def impulse_train(pitch: float, duration: float, sample_rate: float) -> Signal:
    """Unit impulses at the pitch period, nearest-sample rounding."""
    if not 0 < pitch < sample_rate / 2.0:
        raise ValidationError(f"impulse_train: pitch {pitch} Hz outside (0, rate/2)")
    if duration <= 0:
        raise ValidationError("impulse_train: duration must be > 0")
    n = int(round(duration * sample_rate))
    period = sample_rate / pitch
    positions = np.round(np.arange(math.ceil(n / period) + 1) * period).astype(int)
    positions = positions[positions < n]
    samples = np.zeros(n)
    samples[positions] = 1.0
    return Signal(samples=samples, sample_rate=sample_rate)


def _resonator_coeffs(freq: float, bandwidth: float, sample_rate: float):
    """Two-pole resonator (b, a) with unit gain at the resonance frequency."""
    r = math.exp(-math.pi * bandwidth / sample_rate)
    w0 = 2.0 * math.pi * freq / sample_rate
    a = np.array([1.0, -2.0 * r * math.cos(w0), r * r])
    # Evaluate A(z) on the unit circle at the resonance to normalize gain.
    z = np.exp(-1j * w0 * np.arange(3))
    b = np.array([abs(np.sum(a * z))])
    return b, a


def resonator_cascade(src: Signal, spec: VowelSpec) -> Signal:
    """Filter ``src`` through the three formant resonators of ``spec``
    and peak-normalize the result to 0.9."""
    if spec.sample_rate != src.sample_rate:
        raise ConfigurationError(
            f"resonator_cascade: source rate {src.sample_rate} != spec rate {spec.sample_rate}"
        )
    if any(b <= 0 for b in spec.bandwidths):
        raise ConfigurationError("resonator_cascade: bandwidths must be > 0 for stability")
    out = src.samples
    for freq, bandwidth in zip(spec.formants, spec.bandwidths):
        b, a = _resonator_coeffs(freq, bandwidth, src.sample_rate)
        out = lfilter(b, a, out)
    peak = np.max(np.abs(out))
    if peak > 0:
        out = out * (OUTPUT_PEAK / peak)
    return Signal(samples=out, sample_rate=src.sample_rate)


def synthesize_vowel(spec: VowelSpec) -> Signal:
    """Impulse train at the vowel pitch through the formant cascade."""
    source = impulse_train(spec.pitch, spec.duration, spec.sample_rate)
    return resonator_cascade(source, spec)
