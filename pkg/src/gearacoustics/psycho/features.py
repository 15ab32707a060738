"""Stationary (SPA) and time-varying (TVPA) psychoacoustic feature vectors."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import DegenerateVariance, SignalTooShort
from ..features import FeatureVector
from ..signal import TimeSignal
from .fluctuation import FluctuationSeries, timevarying_fluctuation
from .loudness import LoudnessSeries, stationary_loudness, timevarying_loudness
from .roughness import RoughnessSeries, timevarying_roughness
from .stats import highpass_loudness, impulse_factor, kurtosis, variance

SPA_NAMES = ("spa_loudness", "spa_roughness", "spa_fluctuation")
TVPA_NAMES = ("tvpa_loudness_impulse_factor", "tvpa_roughness_variance", "tvpa_fluctuation_kurtosis")
MIN_DURATION_S = 1.0


@dataclass(frozen=True)
class PsychoProfile:
    """Every psychoacoustic quantity both feature sets draw from, computed once."""

    loudness_sone: float
    loudness: LoudnessSeries
    roughness: RoughnessSeries
    fluctuation: FluctuationSeries


def psycho_profile(signal: TimeSignal) -> PsychoProfile:
    if signal.duration_s < MIN_DURATION_S:
        raise SignalTooShort(f"psychoacoustic features need {MIN_DURATION_S} s, got {signal.duration_s:.3f} s")
    sone, _ = stationary_loudness(signal)
    return PsychoProfile(sone, timevarying_loudness(signal), timevarying_roughness(signal),
                         timevarying_fluctuation(signal))


def _profile(source) -> PsychoProfile:
    return source if isinstance(source, PsychoProfile) else psycho_profile(source)


def spa_features(source) -> FeatureVector:
    """Loudness (sone), mean roughness (asper) and mean fluctuation strength (vacil).

    ``source`` is a :class:`TimeSignal` or a precomputed :class:`PsychoProfile`.
    """
    p = _profile(source)
    return FeatureVector(SPA_NAMES, (p.loudness_sone, float(p.roughness.values.mean()),
                                     float(p.fluctuation.values.mean())))


def tvpa_features(source) -> FeatureVector:
    """Impulse factor of the high-passed loudness, roughness variance, fluctuation kurtosis.

    A fluctuation series without any variation (a perfectly steady sound)
    has no defined kurtosis; it is reported as 0, below the smallest value
    a varying series can reach (1).
    """
    p = _profile(source)
    loud = impulse_factor(highpass_loudness(p.loudness).values)
    rough = variance(p.roughness.values)
    try:
        fluc = kurtosis(p.fluctuation.values)
    except DegenerateVariance:
        fluc = 0.0
    return FeatureVector(TVPA_NAMES, (loud, rough, fluc))

