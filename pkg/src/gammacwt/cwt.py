"""Continuous wavelet transform engine.

Coefficients are inner products of the input signal with daughter
wavelets translated to every output sample,

    W[m, i] = dt * sum_k x[k] * conj(g_m(k*dt - i*dt))

computed per level by frequency-domain convolution (FFT, multiply,
inverse FFT) with zero padding to the next power of two, which makes the
convolution exactly linear.  Levels are independent, so the rows of a
scalogram never depend on evaluation order; the implementation is purely
functional and deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .kernels import MotherWavelet, _next_pow2
from .scalespace import ScaleLadder, ladder_daughters

__all__ = [
    "Signal",
    "Scalogram",
    "LevelSpectrum",
    "cwt",
    "level_log_spectrum",
    "log_spectrum",
    "approximation",
    "SPECTRUM_FLOOR_DB",
]

# Log-spectrum values are clipped at this floor so silent bands stay finite.
SPECTRUM_FLOOR_DB = -120.0

# Per-level weight applied when summing coefficient rows back into a
# time-domain approximation.  Flat: the analyses here compare the presence
# of spectral peaks, not reconstruction fidelity.
RECONSTRUCTION_WEIGHT = 1.0


@dataclass(frozen=True)
class Signal:
    """A finite real signal with its sample rate."""

    samples: np.ndarray
    sample_rate: float

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        object.__setattr__(self, "samples", samples)
        if self.sample_rate <= 0:
            raise ValidationError("Signal.sample_rate: must be > 0")
        if samples.ndim != 1 or len(samples) == 0:
            raise ValidationError("Signal.samples: need a non-empty 1-D sequence")
        if not np.all(np.isfinite(samples)):
            raise ValidationError("Signal.samples: values must be finite")

    @property
    def duration(self) -> float:
        return len(self.samples) / self.sample_rate


@dataclass(frozen=True)
class Scalogram:
    """Complex CWT coefficients, one row per ladder level.

    ``edge_margins[m]`` gives the (left, right) sample counts of the
    level-m row that overlap the zero-padded signal boundary; values
    there taper off and are excluded from property measurements.
    """

    coefficients: np.ndarray
    level_center_freqs: np.ndarray
    sample_rate: float
    family: MotherWavelet
    edge_margins: tuple[tuple[int, int], ...]

    @property
    def num_levels(self) -> int:
        return self.coefficients.shape[0]

    @property
    def num_samples(self) -> int:
        return self.coefficients.shape[1]

    def interior(self, m: int) -> slice:
        """Slice of row ``m`` unaffected by either signal edge."""
        left, right = self.edge_margins[m]
        return slice(left, self.num_samples - right)


@dataclass(frozen=True)
class LevelSpectrum:
    """Log-magnitude spectrum associated with one analysis level."""

    level: int
    freqs: np.ndarray
    log_magnitude: np.ndarray


def cwt(sig: Signal, fam: MotherWavelet, ladder: ScaleLadder) -> Scalogram:
    """Transform ``sig`` against the ladder of daughters of ``fam``."""
    daughters = ladder_daughters(fam, ladder, sig.sample_rate)
    n = len(sig.samples)
    dt = 1.0 / sig.sample_rate
    max_len = max(len(d.samples.samples) for d in daughters)
    nfft = _next_pow2(n + max_len - 1)

    x_spec = np.fft.fft(sig.samples, nfft)
    coeffs = np.empty((len(daughters), n), dtype=complex)
    margins = []
    for m, d in enumerate(daughters):
        g = d.samples.samples
        j0 = round(d.samples.t_start * sig.sample_rate)
        kernel = np.zeros(nfft, dtype=complex)
        kernel[(j0 + np.arange(len(g))) % nfft] = g
        rows = np.fft.ifft(x_spec * np.conj(np.fft.fft(kernel)))
        coeffs[m] = dt * rows[:n]
        j_hi = j0 + len(g) - 1
        margins.append((max(0, -j0), max(0, j_hi)))

    return Scalogram(
        coefficients=coeffs,
        level_center_freqs=ladder.center_frequencies(),
        sample_rate=sig.sample_rate,
        family=fam,
        edge_margins=tuple(margins),
    )


def log_spectrum(samples: np.ndarray, sample_rate: float, level: int = 0) -> LevelSpectrum:
    """Hann-windowed log-magnitude spectrum of a real sequence.

    FFT size is the next power of two at or above the sequence length;
    magnitudes below the floor are clipped to SPECTRUM_FLOOR_DB.
    """
    samples = np.asarray(samples, dtype=float)
    window = np.hanning(len(samples))
    nfft = _next_pow2(len(samples))
    spec = np.fft.rfft(samples * window, nfft)
    floor = 10.0 ** (SPECTRUM_FLOOR_DB / 20.0)
    log_mag = 20.0 * np.log10(np.maximum(np.abs(spec), floor))
    freqs = np.fft.rfftfreq(nfft, d=1.0 / sample_rate)
    return LevelSpectrum(level=level, freqs=freqs, log_magnitude=log_mag)


def _check_level(scal: Scalogram, m: int) -> int:
    if int(m) != m or not 0 <= m < scal.num_levels:
        raise ValidationError(f"level {m} out of range [0, {scal.num_levels})")
    return int(m)


def level_log_spectrum(scal: Scalogram, m: int) -> LevelSpectrum:
    """Log spectrum of the real part of coefficient row ``m``."""
    m = _check_level(scal, m)
    return log_spectrum(scal.coefficients[m].real, scal.sample_rate, level=m)


def approximation(scal: Scalogram, m: int) -> Signal:
    """Level-m approximation: the real part of the sum of all coefficient
    rows at level ``m`` and coarser.

    Each increase of ``m`` drops the highest remaining band, so spectral
    content above the level limit frequency is progressively attenuated.
    """
    m = _check_level(scal, m)
    summed = np.sum(scal.coefficients[m:], axis=0).real * RECONSTRUCTION_WEIGHT
    return Signal(samples=summed, sample_rate=scal.sample_rate)
