"""Numerical kernels: FIR design, zero-phase filtering, envelopes, spectra."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import signal as sps

from .errors import InvalidCutoffs, SignalTooShort
from .signal import TimeSignal

PERIODS_OF_LOWER_CUTOFF = 7.5


def fir_tap_count(lower_cutoff_hz: float, design_rate_hz: float) -> int:
    """Largest odd integer not above ``round(7.5 * rate / L)``."""
    n = int(round(PERIODS_OF_LOWER_CUTOFF * design_rate_hz / lower_cutoff_hz))
    if n % 2 == 0:
        n -= 1
    return max(n, 1)


@dataclass(frozen=True)
class FilterKernel:
    taps: np.ndarray
    kind: str
    lower_cutoff_hz: float
    upper_cutoff_hz: Optional[float]
    design_rate_hz: float

    def __len__(self):
        return self.taps.size

    def frequency_response(self, freqs_hz) -> np.ndarray:
        """Complex response of a single pass at ``freqs_hz``."""
        _, h = sps.freqz(self.taps, worN=np.atleast_1d(freqs_hz), fs=self.design_rate_hz)
        return h


@dataclass(frozen=True)
class SpectrumBins:
    frequencies_hz: np.ndarray
    magnitudes: np.ndarray
    resolution_hz: float

    def __len__(self):
        return self.magnitudes.size

    def bin_of(self, freq_hz: float) -> int:
        return int(round(freq_hz / self.resolution_hz))


def design_fir_window(lower_cutoff_hz: float, upper_cutoff_hz: Optional[float],
                      design_rate_hz: float, kind: str = "band_pass") -> FilterKernel:
    """Hamming-windowed sinc kernel whose length spans 7.5 periods of the lower cutoff.

    The band-pass kernel is scaled to unity gain at the centre of its passband,
    the high-pass kernel at Nyquist.
    """
    nyq = design_rate_hz / 2
    if kind not in ("band_pass", "high_pass"):
        raise InvalidCutoffs(f"unknown filter kind {kind!r}")
    if not 0 < lower_cutoff_hz < nyq:
        raise InvalidCutoffs(f"lower cutoff {lower_cutoff_hz} Hz outside (0, {nyq})")
    if kind == "band_pass":
        if upper_cutoff_hz is None or not lower_cutoff_hz < upper_cutoff_hz < nyq:
            raise InvalidCutoffs(f"upper cutoff {upper_cutoff_hz} Hz outside ({lower_cutoff_hz}, {nyq})")
        edges = [lower_cutoff_hz, upper_cutoff_hz]
    else:
        upper_cutoff_hz = None
        edges = lower_cutoff_hz

    n = fir_tap_count(lower_cutoff_hz, design_rate_hz)
    taps = sps.firwin(n, edges, pass_zero=False, window="hamming", fs=design_rate_hz)
    # enforce exact symmetry (firwin is symmetric up to rounding)
    taps = 0.5 * (taps + taps[::-1])
    taps.setflags(write=False)
    return FilterKernel(taps, kind, float(lower_cutoff_hz),
                        None if upper_cutoff_hz is None else float(upper_cutoff_hz),
                        float(design_rate_hz))


def zero_phase(values, taps) -> np.ndarray:
    """Forward-backward FIR filtering of a plain array.

    The input is reflect-padded by one kernel length on each side so that
    start-up transients fall outside the returned span.
    """
    x = np.asarray(values, dtype=float)
    h = np.asarray(taps, dtype=float)
    n = h.size
    if x.size <= 3 * n:
        raise SignalTooShort(f"{x.size} samples, need more than {3 * n} for a {n}-tap kernel")
    padded = np.pad(x, n, mode="reflect")
    forward = sps.oaconvolve(padded, h)[: padded.size]
    backward = sps.oaconvolve(forward[::-1], h)[: padded.size][::-1]
    return backward[n:-n]


def filter_zero_phase(signal: TimeSignal, kernel: FilterKernel) -> TimeSignal:
    """Apply ``kernel`` once forwards and once backwards (squared magnitude, no phase)."""
    return signal.with_samples(zero_phase(signal.samples, kernel.taps))


def analytic_envelope(values) -> np.ndarray:
    """Magnitude of the analytic signal, built in the frequency domain."""
    x = np.asarray(values.samples if isinstance(values, TimeSignal) else values, dtype=float)
    if x.size < 2:
        raise SignalTooShort("need at least 2 samples for an envelope")
    return np.abs(sps.hilbert(x))


def magnitude_spectrum(values, design_rate_hz: float) -> SpectrumBins:
    """One-sided amplitude spectrum.

    A unit-amplitude sinusoid centred on a bin reads 1.0 at that bin; the DC
    bin holds the magnitude of the mean.
    """
    x = np.asarray(values, dtype=float)
    n = x.size
    if n < 2:
        raise SignalTooShort("need at least 2 values for a spectrum")
    mags = np.abs(np.fft.rfft(x)) / n
    if n % 2 == 0:
        mags[1:-1] *= 2
    else:
        mags[1:] *= 2
    freqs = np.arange(mags.size) * (design_rate_hz / n)
    return SpectrumBins(freqs, mags, design_rate_hz / n)
