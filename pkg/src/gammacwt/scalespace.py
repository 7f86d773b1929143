"""Scale ladders and daughter wavelets.

A daughter wavelet is the dilated, translated copy

    g_{a,b}(t) = (1/sqrt(a)) * g((t - b) / a)

and an analysis ladder discretizes the dilation as a = a0**m for level
m = 0 .. num_levels-1, tuned so that level 0 sits at a requested top
center frequency.  Translation stays continuous: the transform engine
evaluates every output sample, so ladder daughters are built at b = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, ValidationError
from .kernels import MotherWavelet, SampledWavelet, sample_wavelet

__all__ = [
    "ScaleLadder",
    "DaughterWavelet",
    "daughter",
    "ladder_daughters",
    "level_limit_frequency",
    "DEFAULT_LADDER",
]


@dataclass(frozen=True)
class ScaleLadder:
    """Geometric dilation ladder.

    Level m analyzes around ``top_center_freq / a0**m``; larger m means
    coarser scale and lower frequency.  ``b0`` is the translation base of
    the classical discretization b = k * b0 * a0**m; it is kept for
    completeness but the dense transform does not subsample translations.
    """

    a0: float = 1.13
    b0: float = 1.0
    num_levels: int = 30
    top_center_freq: float = 8000.0

    def __post_init__(self):
        if self.a0 <= 1.0:
            raise ValidationError("ScaleLadder.a0: dilation base must be > 1")
        if self.b0 <= 0.0:
            raise ValidationError("ScaleLadder.b0: translation base must be > 0")
        if int(self.num_levels) != self.num_levels or self.num_levels < 1:
            raise ValidationError("ScaleLadder.num_levels: must be a positive integer")
        if self.top_center_freq <= 0.0:
            raise ValidationError("ScaleLadder.top_center_freq: must be > 0")

    def center_frequency(self, m: int) -> float:
        return self.top_center_freq / self.a0**m

    def center_frequencies(self) -> np.ndarray:
        return self.top_center_freq / self.a0 ** np.arange(self.num_levels)


DEFAULT_LADDER = ScaleLadder()


def level_limit_frequency(ladder: ScaleLadder, m: int) -> float:
    """Upper frequency limit of analysis level ``m``: content above it is
    progressively removed from the level-m approximation."""
    if int(m) != m or not 0 <= m < ladder.num_levels:
        raise ValidationError(
            f"level_limit_frequency: level {m} out of range [0, {ladder.num_levels})"
        )
    return ladder.center_frequency(int(m))


@dataclass(frozen=True)
class DaughterWavelet:
    """A sampled dilated/translated copy of a mother kernel."""

    base: MotherWavelet
    a: float
    b: float
    samples: SampledWavelet


def daughter(fam: MotherWavelet, a: float, b: float, sample_rate: float) -> DaughterWavelet:
    """Build the sampled daughter (1/sqrt(a)) * g((t - b)/a).

    The 1/sqrt(a) factor preserves energy; the spectrum scales so the
    centroid moves to (mother centroid) / a.
    """
    if a <= 0:
        raise ValidationError("daughter: dilation a must be > 0")
    sampled = sample_wavelet(fam, sample_rate, a=a, b=b)
    return DaughterWavelet(base=fam, a=float(a), b=float(b), samples=sampled)


def ladder_daughters(
    fam: MotherWavelet, ladder: ScaleLadder, sample_rate: float
) -> list[DaughterWavelet]:
    """One daughter per ladder level, level 0 first.

    Dilations are a = a_base * a0**m with a_base chosen so the level-0
    daughter peaks at ``ladder.top_center_freq``.
    """
    if fam.nominal_center_freq <= 0:
        raise ConfigurationError(
            f"ladder_daughters: kernel '{fam.name}' has no positive center frequency"
        )
    if ladder.top_center_freq > sample_rate / 2.0:
        raise ConfigurationError(
            f"ladder_daughters: top center frequency {ladder.top_center_freq} Hz "
            f"aliases at sample rate {sample_rate} Hz"
        )
    a_base = fam.nominal_center_freq / ladder.top_center_freq
    return [
        daughter(fam, a_base * ladder.a0**m, 0.0, sample_rate)
        for m in range(ladder.num_levels)
    ]
