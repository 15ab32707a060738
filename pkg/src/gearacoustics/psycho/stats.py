"""Condensing time-varying psychoacoustic series into scalars."""

from __future__ import annotations

import numpy as np

from ..dsp import design_fir_window, zero_phase
from ..errors import DegenerateVariance, SeriesTooShort, TooFewValues, ZeroMean
from .loudness import LoudnessSeries

HIGHPASS_HZ = 10.0


def highpass_loudness(series: LoudnessSeries, cutoff_hz: float = HIGHPASS_HZ) -> LoudnessSeries:
    """Remove slow loudness drift below ``cutoff_hz`` and restore the series mean.

    The kernel follows the same 7.5-period windowed-FIR rule as the
    band-pass, designed at the frame rate (375 taps for 10 Hz at 500 Hz),
    and runs forward and backward. Adding the mean back keeps max/mean
    ratios defined; the few frames a burst can push below zero are clipped.
    """
    rate = 1.0 / series.frame_period_s
    kernel = design_fir_window(cutoff_hz, None, rate, "high_pass")
    values = np.asarray(series.values, dtype=float)
    if values.size <= 3 * len(kernel):
        raise SeriesTooShort(f"{values.size} frames, need more than {3 * len(kernel)}")
    mean = values.mean()
    out = zero_phase(values - mean, kernel.taps) + mean
    return LoudnessSeries(np.maximum(out, 0.0), series.frame_period_s, series.start_time_s)


def impulse_factor(values) -> float:
    """Ratio of maximum to mean."""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise TooFewValues("impulse factor of an empty series")
    mean = v.mean()
    if not mean > 0:
        raise ZeroMean(f"impulse factor needs a positive mean, got {mean}")
    return float(v.max() / mean)


def variance(values) -> float:
    """Population variance (normalised by N)."""
    v = np.asarray(values, dtype=float)
    if v.size < 2:
        raise TooFewValues(f"variance needs 2 values, got {v.size}")
    return float(np.mean((v - v.mean()) ** 2))


def kurtosis(values) -> float:
    """Fourth standardised moment, 3 for a Gaussian."""
    v = np.asarray(values, dtype=float)
    if v.size < 4:
        raise TooFewValues(f"kurtosis needs 4 values, got {v.size}")
    dev = v - v.mean()
    m2 = np.mean(dev ** 2)
    # relative test so a constant series with rounding noise still counts as degenerate
    if m2 <= (1e-12 * max(np.abs(v).max(), 1e-300)) ** 2:
        raise DegenerateVariance("kurtosis of a constant series")
    return float(np.mean(dev ** 4) / m2 ** 2)

