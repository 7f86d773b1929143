import numpy as np
import pytest

from gammacwt import (
    Morlet,
    ScaleLadder,
    Signal,
    ValidationError,
    approximation,
    cwt,
    level_log_spectrum,
    log_spectrum,
)
from gammacwt.cwt import SPECTRUM_FLOOR_DB
from gammacwt.errors import ConfigurationError

from conftest import SAMPLE_RATE, tone

FS = SAMPLE_RATE


def test_signal_validation():
    with pytest.raises(ValidationError):
        Signal(samples=np.array([]), sample_rate=FS)
    with pytest.raises(ValidationError):
        Signal(samples=np.array([0.0, np.nan]), sample_rate=FS)
    with pytest.raises(ValidationError):
        Signal(samples=np.zeros(10), sample_rate=0.0)


def test_zero_signal_gives_zero_scalogram(default_family, default_ladder):
    scal = cwt(Signal(np.zeros(2048), FS), default_family, default_ladder)
    assert scal.coefficients.shape == (default_ladder.num_levels, 2048)
    assert np.all(scal.coefficients == 0)


def test_center_freqs_strictly_decreasing(default_family, default_ladder):
    scal = cwt(Signal(np.zeros(256), FS), default_family, default_ladder)
    assert np.all(np.diff(scal.level_center_freqs) < 0)


def test_linearity(default_family):
    rng = np.random.default_rng(7)
    x = rng.standard_normal(2000)
    y = rng.standard_normal(2000)
    ladder = ScaleLadder(num_levels=12)
    wx = cwt(Signal(x, FS), default_family, ladder).coefficients
    wy = cwt(Signal(y, FS), default_family, ladder).coefficients
    wxy = cwt(Signal(x + y, FS), default_family, ladder).coefficients
    rel = np.max(np.abs(wxy - wx - wy)) / np.max(np.abs(wxy))
    assert rel < 1e-9


def test_amplitude_scaling_exact(default_family):
    rng = np.random.default_rng(11)
    x = rng.standard_normal(1500)
    ladder = ScaleLadder(num_levels=10)
    w1 = cwt(Signal(x, FS), default_family, ladder).coefficients
    w2 = cwt(Signal(2.0 * x, FS), default_family, ladder).coefficients
    assert np.array_equal(w2, 2.0 * w1)


@pytest.mark.parametrize("freq", [300.0, 730.0, 1090.0, 2440.0])
def test_tone_localization(default_family, default_ladder, freq):
    scal = cwt(Signal(tone(freq), FS), default_family, default_ladder)
    power = [
        np.mean(np.abs(scal.coefficients[m][scal.interior(m)]) ** 2)
        for m in range(scal.num_levels)
    ]
    best = scal.level_center_freqs[int(np.argmax(power))]
    assert best / freq <= default_ladder.a0 + 1e-9
    assert freq / best <= default_ladder.a0 + 1e-9


def test_time_shift_covariance(default_family):
    rng = np.random.default_rng(3)
    x = rng.standard_normal(2000)
    shift = 160
    ladder = ScaleLadder(num_levels=12)
    w = cwt(Signal(x, FS), default_family, ladder)
    ws = cwt(Signal(np.roll(x, shift), FS), default_family, ladder)
    for m in range(ladder.num_levels):
        left, right = w.edge_margins[m]
        lo = left + shift
        hi = w.num_samples - right - shift
        a = w.coefficients[m][lo - shift : hi - shift]
        b = ws.coefficients[m][lo:hi]
        assert np.max(np.abs(a - b)) / np.max(np.abs(a)) < 1e-6


def test_determinism(default_family, default_ladder):
    x = np.random.default_rng(5).standard_normal(3000)
    w1 = cwt(Signal(x, FS), default_family, default_ladder)
    w2 = cwt(Signal(x, FS), default_family, default_ladder)
    assert w1.coefficients.tobytes() == w2.coefficients.tobytes()


def test_ladder_rate_mismatch_raises(default_family):
    sig = Signal(np.zeros(256), 4000.0)
    with pytest.raises(ConfigurationError):
        cwt(sig, default_family, ScaleLadder(top_center_freq=8000.0))


# -------------------------------------------------------------- level spectra

def test_level_spectrum_peak_at_tone(default_family, default_ladder):
    freq = 500.0
    scal = cwt(Signal(tone(freq), FS), default_family, default_ladder)
    m = int(np.argmin(np.abs(scal.level_center_freqs - freq)))
    spec = level_log_spectrum(scal, m)
    bin_hz = spec.freqs[1] - spec.freqs[0]
    peak = spec.freqs[np.argmax(spec.log_magnitude)]
    assert abs(peak - freq) <= bin_hz


def test_level_spectrum_spans_nyquist(default_family, default_ladder):
    scal = cwt(Signal(tone(440.0, duration=0.1), FS), default_family, default_ladder)
    spec = level_log_spectrum(scal, 0)
    assert spec.freqs[0] == 0.0
    assert spec.freqs[-1] == pytest.approx(FS / 2.0)


def test_zero_row_sits_at_floor():
    spec = log_spectrum(np.zeros(1024), FS, 0)
    assert np.all(spec.log_magnitude == SPECTRUM_FLOOR_DB)


def test_level_spectrum_parseval(default_family, default_ladder):
    scal = cwt(Signal(tone(500.0), FS), default_family, default_ladder)
    m = int(np.argmin(np.abs(scal.level_center_freqs - 500.0)))
    spec = level_log_spectrum(scal, m)
    mag = 10.0 ** (spec.log_magnitude / 20.0)
    nfft = 2 * (len(mag) - 1)
    spectral = (mag[0] ** 2 + 2.0 * np.sum(mag[1:-1] ** 2) + mag[-1] ** 2) / nfft
    row = scal.coefficients[m].real
    windowed = row * np.hanning(len(row))
    assert spectral == pytest.approx(np.sum(windowed**2), rel=0.01)


def test_level_spectrum_rejects_bad_level(default_family, default_ladder):
    scal = cwt(Signal(np.zeros(128), FS), default_family, default_ladder)
    with pytest.raises(ValidationError):
        level_log_spectrum(scal, default_ladder.num_levels)


# -------------------------------------------------------------- approximation

def test_approximation_level0_is_full_sum(default_family, default_ladder):
    x = np.random.default_rng(9).standard_normal(1000)
    scal = cwt(Signal(x, FS), default_family, default_ladder)
    full = approximation(scal, 0)
    manual = np.sum(scal.coefficients, axis=0).real
    assert np.array_equal(full.samples, manual)


def test_approximation_attenuates_tone_above_limit(default_family, default_ladder):
    scal = cwt(Signal(tone(3000.0), FS), default_family, default_ladder)
    m = int(np.argmin(np.abs(scal.level_center_freqs - 1000.0)))
    interior = slice(2000, -2000)
    rms0 = np.sqrt(np.mean(approximation(scal, 0).samples[interior] ** 2))
    rmsm = np.sqrt(np.mean(approximation(scal, m).samples[interior] ** 2))
    assert rmsm < 0.25 * rms0


def test_approximation_spectral_attenuation_12db(default_family, default_ladder):
    scal = cwt(Signal(tone(3000.0), FS), default_family, default_ladder)
    m = int(np.argmin(np.abs(scal.level_center_freqs - 1000.0)))
    limit = scal.level_center_freqs[m]
    s0 = log_spectrum(approximation(scal, 0).samples, FS, 0)
    sm = log_spectrum(approximation(scal, m).samples, FS, m)
    above = s0.freqs > limit
    drop = np.max(s0.log_magnitude[above]) - np.max(sm.log_magnitude[above])
    assert drop >= 12.0


def test_approximation_energy_nonincreasing_for_noise(default_family):
    # Averaged over seeds; the last transitions are excluded because a
    # one- or two-band tail is no longer a lowpass approximation.
    ladder = ScaleLadder(num_levels=20)
    energies = []
    for seed in range(10):
        x = np.random.default_rng(seed).standard_normal(4000)
        scal = cwt(Signal(x, FS), default_family, ladder)
        energies.append([np.sum(approximation(scal, m).samples ** 2) for m in range(20)])
    mean = np.mean(energies, axis=0)
    assert np.all(np.diff(mean[:-2]) <= 0)


def test_approximation_rejects_bad_level(default_family, default_ladder):
    scal = cwt(Signal(np.zeros(128), FS), default_family, default_ladder)
    with pytest.raises(ValidationError):
        approximation(scal, -1)


def test_real_family_rows_are_real(default_ladder):
    scal = cwt(Signal(tone(1000.0, duration=0.1), FS), Morlet(), default_ladder)
    assert np.max(np.abs(scal.coefficients.imag)) < 1e-12
