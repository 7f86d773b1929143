"""Continuous wavelet analysis built around the gammachirp auditory kernel.

The package provides the gammachirp impulse response and closed-form
spectrum, reference wavelets (Morlet, Mexican hat, Gaussian derivatives),
a geometric scale ladder with daughter-wavelet construction, an FFT-based
continuous wavelet transform, a formant vowel synthesizer, and a
three-family formant-visibility comparison, plus a small CLI.
"""

from .analysis import (
    ABSENT,
    ATTENUATED,
    DETECTED,
    ComparisonReport,
    FormantReport,
    compare_families,
    comparison_families,
    detect_peaks,
    formant_report,
)
from .cwt import (
    LevelSpectrum,
    Scalogram,
    Signal,
    approximation,
    cwt,
    level_log_spectrum,
    log_spectrum,
)
from .errors import ConfigurationError, ValidationError
from .kernels import (
    DEFAULT_GAMMACHIRP,
    AdmissibilityReport,
    Gammachirp,
    GammachirpParams,
    GaussianDerivative,
    MexicanHat,
    Morlet,
    MotherWavelet,
    SampledWavelet,
    asymmetric_factor,
    check_admissibility,
    chirp_gain,
    complex_gamma,
    erb,
    gammachirp_ir,
    gammachirp_spectrum,
    gammatone,
    gammatone_spectrum,
    gaussian_derivative,
    mexican_hat,
    morlet,
    normalize,
    sample_mother,
)
from .scalespace import (
    DEFAULT_LADDER,
    DaughterWavelet,
    ScaleLadder,
    daughter,
    ladder_daughters,
    level_limit_frequency,
)
from .synth import (
    VowelSpec,
    builtin_vowel,
    impulse_train,
    resonator_cascade,
    synthesize_vowel,
)

__version__ = "0.1.0"
