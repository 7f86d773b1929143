import numpy as np
import pytest

from gammacwt import (
    ABSENT,
    ATTENUATED,
    DETECTED,
    ScaleLadder,
    Signal,
    builtin_vowel,
    compare_families,
    cwt,
    detect_peaks,
    formant_report,
)
from gammacwt.analysis import (
    _RANK,
    comparison_families,
    pooled_level_spectra,
)
from gammacwt.cwt import log_spectrum

from conftest import SAMPLE_RATE, tone

FS = SAMPLE_RATE


def test_detect_peaks_single_tone():
    spec = log_spectrum(tone(730.0, amplitude=0.5), FS, 0)
    peaks = detect_peaks(spec)
    bin_hz = spec.freqs[1] - spec.freqs[0]
    assert len(peaks) == 1
    assert abs(peaks[0][0] - 730.0) <= bin_hz


def test_detect_peaks_flat_floor_empty():
    spec = log_spectrum(np.zeros(4096), FS, 0)
    assert detect_peaks(spec) == []


def test_detect_peaks_two_tones_500_apart():
    x = 0.4 * (tone(1000.0) + tone(1500.0))
    peaks = detect_peaks(log_spectrum(x, FS, 0))
    freqs = sorted(f for f, _ in peaks)
    assert len(freqs) == 2
    assert abs(freqs[0] - 1000.0) < 5.0
    assert abs(freqs[1] - 1500.0) < 5.0


def test_detect_peaks_expected_matching():
    x = 0.4 * (tone(1000.0) + tone(1500.0))
    spec = log_spectrum(x, FS, 0)
    matched = detect_peaks(spec, expected=[1010.0, 700.0], match_tolerance_hz=50.0)
    assert len(matched) == 1
    assert abs(matched[0][0] - 1000.0) < 5.0


def test_pooled_spectra_monotone_pointwise(default_family, default_ladder, vowel_signals):
    _, sig = vowel_signals["a"]
    scal = cwt(sig, default_family, default_ladder)
    specs = pooled_level_spectra(scal)
    for m in range(len(specs) - 1):
        assert np.all(specs[m].log_magnitude >= specs[m + 1].log_magnitude - 1e-9)


def test_zero_signal_report_all_absent(default_family, default_ladder):
    spec = builtin_vowel("a")
    report = formant_report(Signal(np.zeros(4000), FS), default_family, default_ladder, spec)
    assert all(cell == ABSENT for row in report.presence for cell in row)


def test_report_limit_frequencies_match_ladder(default_family, default_ladder, vowel_signals):
    spec, sig = vowel_signals["a"]
    report = formant_report(sig, default_family, default_ladder, spec)
    for m, reading in enumerate(report.per_level):
        assert reading.limit_hz == pytest.approx(default_ladder.center_frequency(m))


def test_formant_report_a_f3_detected_at_fine_levels(comparisons):
    gc = comparisons["a"].reports[0]
    assert gc.family == "gammachirp"
    for m, reading in enumerate(gc.per_level):
        if reading.limit_hz >= 2440.0:
            assert gc.presence[m][2] == DETECTED


def test_formant_report_a_f1_never_detected_past_deep_limits(comparisons):
    # F1 = 730 Hz cannot stay fully detected once the level limit falls
    # to roughly 520 Hz and below.
    for report in comparisons["a"].reports:
        for m, reading in enumerate(report.per_level):
            if reading.limit_hz <= 522.0:
                assert report.presence[m][0] in (ATTENUATED, ABSENT)


def test_monotone_visibility(comparisons):
    for comparison in comparisons.values():
        for report in comparison.reports:
            for k in range(3):
                ranks = [_RANK[report.presence[m][k]] for m in range(len(report.presence))]
                assert all(b <= a for a, b in zip(ranks, ranks[1:]))


def test_limit_consistency(comparisons):
    # Never fully detected when the formant sits above twice the limit.
    for comparison in comparisons.values():
        for report in comparison.reports:
            for m, reading in enumerate(report.per_level):
                for k, formant in enumerate(report.formants):
                    if reading.limit_hz < 0.5 * formant:
                        assert report.presence[m][k] != DETECTED


def test_every_family_detects_f1_at_finest_level(comparisons):
    for comparison in comparisons.values():
        for report in comparison.reports:
            assert report.presence[0][0] == DETECTED
        assert comparison.agreement[0][0] == 3


def test_comparison_has_exactly_three_families(comparisons):
    names = [fam.name for fam in comparison_families()]
    assert names == ["gammachirp", "morlet", "mexican_hat"]
    for comparison in comparisons.values():
        assert [r.family for r in comparison.reports] == names


def test_u_low_formant_detected_at_least_as_strongly_as_morlet(comparisons):
    # Peak level (dB) of F1 in the finest-level spectrum per family.
    reports = {r.family: r for r in comparisons["u"].reports}
    heights = {}
    for name, report in reports.items():
        hit = [p for p in report.per_level[0].peaks if abs(p[0] - 300.0) <= 50.0]
        heights[name] = max(db for _, db in hit)
    assert heights["gammachirp"] >= heights["morlet"]
    assert heights["mexican_hat"] >= heights["morlet"]


def test_compare_families_deterministic(default_ladder):
    spec = builtin_vowel("i", duration=0.25)
    ladder = ScaleLadder(num_levels=12)
    assert compare_families(spec, ladder) == compare_families(spec, ladder)
