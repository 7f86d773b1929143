"""Formant visibility analysis and the three-family comparison.

Each ladder level m is summarized by the pooled power spectrum of the
coefficient rows at level m and coarser, so climbing levels
progressively removes high frequencies.  Pooling is incoherent (power
adds, phases do not), which makes the level summaries immune to the
cross-band phase interference a direct row sum suffers with causal
complex kernels, and guarantees that spectral content can only shrink as
levels climb.  A formant is then classified per level as detected,
attenuated or absent from three measurements on the smoothed spectral
envelope:

* a local peak matched to the formant within half a pitch period,
* the peak height above the local median (its local visibility), and
* the drop of the peak height relative to the finest level (how much of
  the formant the coarser levels have removed).

A formant whose frequency lies well above a level's limit frequency can
never count as fully detected there, no matter how the measurements come
out; the wavelet band edges are not vertical, so the factor-of-two grace
region below the limit is allowed to keep its own evidence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import uniform_filter1d
from scipy.signal import find_peaks

from .cwt import SPECTRUM_FLOOR_DB, LevelSpectrum, Scalogram, Signal, cwt
from .kernels import (
    DEFAULT_GAMMACHIRP,
    Gammachirp,
    MexicanHat,
    Morlet,
    MotherWavelet,
    _next_pow2,
    normalize,
)
from .scalespace import ScaleLadder, level_limit_frequency
from .synth import VowelSpec, synthesize_vowel

__all__ = [
    "DETECTED",
    "ATTENUATED",
    "ABSENT",
    "LevelReading",
    "FormantReport",
    "ComparisonReport",
    "detect_peaks",
    "pooled_level_spectra",
    "formant_report",
    "compare_families",
    "comparison_families",
]

DETECTED = "detected"
ATTENUATED = "attenuated"
ABSENT = "absent"

_RANK = {DETECTED: 2, ATTENUATED: 1, ABSENT: 0}
_LABEL = {rank: label for label, rank in _RANK.items()}

# Width of the boxcar smoothing applied to log spectra before peak
# picking.  Matching the 100 Hz pitch spacing nulls the harmonic comb
# ripple while leaving formant humps sharp.
ENVELOPE_SMOOTHING_HZ = 100.0

# Minimum prominence (dB) for a smoothed-envelope maximum to count as a
# peak; residual harmonic ripple stays under ~4 dB while true formant
# humps exceed 8 dB.
PEAK_PROMINENCE_DB = 5.0

# Half-width of the window used for the local spectral median.
LOCAL_MEDIAN_HALF_WIDTH_HZ = 500.0

# Classification thresholds (dB).  "Margin" is peak height above the
# local median; "attenuation" is the peak drop relative to level 0.
MARGIN_DETECTED_DB = 6.0
MARGIN_ABSENT_DB = 1.0
ATTENUATION_DETECTED_DB = 6.0
ATTENUATION_ABSENT_DB = 15.0

# A formant at F cannot be "detected" at levels whose limit frequency is
# below F times this factor.
LIMIT_GRACE_FACTOR = 0.5


def pooled_level_spectra(scal: Scalogram) -> list[LevelSpectrum]:
    """Log spectrum of each analysis level: the power pooled over the
    real parts of all coefficient rows at that level and coarser.

    Because every term is non-negative, the pooled power can only fall
    as the level index climbs; intermittent phase cancellation between
    neighboring bands cannot masquerade as lost signal content.
    """
    n = scal.num_samples
    window = np.hanning(n)
    nfft = _next_pow2(n)
    power = np.abs(np.fft.rfft(scal.coefficients.real * window, nfft, axis=1)) ** 2
    suffix = np.cumsum(power[::-1], axis=0)[::-1]
    floor = 10.0 ** (SPECTRUM_FLOOR_DB / 10.0)
    log_mag = 10.0 * np.log10(np.maximum(suffix, floor))
    freqs = np.fft.rfftfreq(nfft, d=1.0 / scal.sample_rate)
    return [
        LevelSpectrum(level=m, freqs=freqs, log_magnitude=log_mag[m])
        for m in range(scal.num_levels)
    ]


def _envelope(spec: LevelSpectrum) -> np.ndarray:
    bin_hz = spec.freqs[1] - spec.freqs[0]
    width = max(1, int(round(ENVELOPE_SMOOTHING_HZ / bin_hz)) | 1)
    return uniform_filter1d(spec.log_magnitude, size=width, mode="nearest")


def _envelope_peaks(spec: LevelSpectrum, envelope: np.ndarray) -> list[tuple[float, float]]:
    """Envelope maxima as (Hz, dB).

    Heights are read from the smoothed envelope (robust against harmonic
    ripple); positions are refined to the raw-spectrum maximum inside the
    smoothing window, which pins an isolated tone to its exact FFT bin.
    """
    bin_hz = spec.freqs[1] - spec.freqs[0]
    half = max(1, int(round(ENVELOPE_SMOOTHING_HZ / bin_hz)) // 2)
    idx, _ = find_peaks(envelope, prominence=PEAK_PROMINENCE_DB)
    peaks = []
    for i in idx:
        lo = max(0, i - half)
        j = lo + int(np.argmax(spec.log_magnitude[lo : i + half + 1]))
        peaks.append((float(spec.freqs[j]), float(envelope[i])))
    return peaks


def _match_peak(peaks, freq: float, tolerance_hz: float):
    best = None
    for peak_freq, peak_db in peaks:
        dist = abs(peak_freq - freq)
        if dist <= tolerance_hz and (best is None or dist < abs(best[0] - freq)):
            best = (peak_freq, peak_db)
    return best


def _local_median(spec: LevelSpectrum, envelope: np.ndarray, freq: float) -> float:
    lo = freq - LOCAL_MEDIAN_HALF_WIDTH_HZ
    hi = freq + LOCAL_MEDIAN_HALF_WIDTH_HZ
    mask = (spec.freqs >= lo) & (spec.freqs <= hi)
    return float(np.median(envelope[mask]))


def detect_peaks(
    spec: LevelSpectrum,
    expected=None,
    match_tolerance_hz: float = 50.0,
) -> list[tuple[float, float]]:
    """Peaks (Hz, dB) of the smoothed spectral envelope.

    Without ``expected``, all envelope maxima whose prominence exceeds
    PEAK_PROMINENCE_DB are returned in frequency order.  With a list of
    expected frequencies, each is matched to its nearest peak within
    ``match_tolerance_hz`` and only the matches are returned.
    """
    envelope = _envelope(spec)
    peaks = _envelope_peaks(spec, envelope)
    if expected is None:
        return peaks
    matched = []
    for freq in expected:
        hit = _match_peak(peaks, freq, match_tolerance_hz)
        if hit is not None:
            matched.append(hit)
    return matched


@dataclass(frozen=True)
class LevelReading:
    """Peaks seen at one analysis level."""

    level: int
    limit_hz: float
    peaks: tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class FormantReport:
    """Per-level formant visibility of one vowel under one kernel family.

    ``presence[m][k]`` classifies formant k at level m as one of
    DETECTED / ATTENUATED / ABSENT.
    """

    vowel: str
    family: str
    formants: tuple[float, float, float]
    per_level: tuple[LevelReading, ...]
    presence: tuple[tuple[str, str, str], ...]


def _classify(matched, margin, attenuation, limit_ok) -> str:
    if matched is None or margin < MARGIN_ABSENT_DB:
        return ABSENT
    if attenuation >= ATTENUATION_ABSENT_DB:
        return ABSENT
    if (
        attenuation <= ATTENUATION_DETECTED_DB
        and margin >= MARGIN_DETECTED_DB
        and limit_ok
    ):
        return DETECTED
    return ATTENUATED


def formant_report(
    sig: Signal,
    fam: MotherWavelet,
    ladder: ScaleLadder,
    spec: VowelSpec,
) -> FormantReport:
    """Transform ``sig`` and classify each formant of ``spec`` per level."""
    scal = cwt(sig, fam, ladder)
    tolerance = spec.pitch / 2.0

    level_specs = pooled_level_spectra(scal)
    envelopes = [_envelope(lspec) for lspec in level_specs]

    all_peaks = [_envelope_peaks(level_specs[m], envelopes[m]) for m in range(ladder.num_levels)]
    matches = [
        [_match_peak(all_peaks[m], f, tolerance) for f in spec.formants]
        for m in range(ladder.num_levels)
    ]

    # Reference heights at the finest level; a formant invisible even
    # there has no attenuation baseline and is judged on margin alone.
    refs = [match[1] if match is not None else None for match in matches[0]]

    presence = []
    ranks = [_RANK[DETECTED]] * 3
    per_level = []
    for m in range(ladder.num_levels):
        limit = level_limit_frequency(ladder, m)
        row = []
        for k, formant in enumerate(spec.formants):
            hit = matches[m][k]
            if hit is None:
                margin = -np.inf
                attenuation = np.inf
            else:
                margin = hit[1] - _local_median(level_specs[m], envelopes[m], formant)
                attenuation = (refs[k] - hit[1]) if refs[k] is not None else 0.0
            label = _classify(hit, margin, attenuation, limit >= LIMIT_GRACE_FACTOR * formant)
            # Visibility can only degrade as levels get coarser.
            ranks[k] = min(ranks[k], _RANK[label])
            row.append(_LABEL[ranks[k]])
        presence.append(tuple(row))
        per_level.append(
            LevelReading(level=m, limit_hz=limit, peaks=tuple(all_peaks[m]))
        )

    return FormantReport(
        vowel=spec.label,
        family=fam.name,
        formants=spec.formants,
        per_level=tuple(per_level),
        presence=tuple(presence),
    )


def comparison_families() -> tuple[MotherWavelet, ...]:
    """The three kernel families of the standard comparison."""
    return (Gammachirp(normalize(DEFAULT_GAMMACHIRP)), Morlet(), MexicanHat())


@dataclass(frozen=True)
class ComparisonReport:
    """Formant reports of the gammachirp, Morlet and Mexican hat kernels
    on identical input, plus the per-level per-formant tally of families
    that fully detected each formant."""

    vowel: str
    reports: tuple[FormantReport, ...]
    agreement: tuple[tuple[int, int, int], ...]


def compare_families(spec: VowelSpec, ladder: ScaleLadder) -> ComparisonReport:
    """Synthesize the vowel once and analyze it with all three families."""
    sig = synthesize_vowel(spec)
    reports = tuple(formant_report(sig, fam, ladder, spec) for fam in comparison_families())
    agreement = tuple(
        tuple(
            sum(1 for report in reports if report.presence[m][k] == DETECTED)
            for k in range(3)
        )
        for m in range(ladder.num_levels)
    )
    return ComparisonReport(vowel=spec.label, reports=reports, agreement=agreement)
