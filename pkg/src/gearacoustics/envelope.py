"""Normal, squared and logarithmic envelope spectra of a band-limited signal."""

from __future__ import annotations

import enum

import numpy as np

from .dsp import SpectrumBins, analytic_envelope, design_fir_window, filter_zero_phase, magnitude_spectrum
from .signal import TimeSignal

LOG_FLOOR_REL = 1e-12


class EnvelopeKind(str, enum.Enum):
    NES = "NES"
    SES = "SES"
    LES = "LES"


def band_envelope(signal: TimeSignal, lower_hz: float, upper_hz: float) -> np.ndarray:
    """Analytic envelope of the zero-phase band-passed signal."""
    kernel = design_fir_window(lower_hz, upper_hz, signal.sample_rate_hz, "band_pass")
    return analytic_envelope(filter_zero_phase(signal, kernel).samples)


def spectra_from_envelope(env, sample_rate_hz: float, kinds=tuple(EnvelopeKind)) -> dict:
    """Envelope spectra of every requested kind from one precomputed envelope."""
    env = np.asarray(env, dtype=float)
    power = env * env
    out = {}
    for kind in kinds:
        kind = EnvelopeKind(kind)
        if kind is EnvelopeKind.NES:
            seq = env
        elif kind is EnvelopeKind.SES:
            seq = power
        else:
            floor = LOG_FLOOR_REL * power.max() if power.max() > 0 else LOG_FLOOR_REL
            seq = np.log(power + floor)
        spec = magnitude_spectrum(seq - seq.mean(), sample_rate_hz)
        if kind is not EnvelopeKind.NES:
            spec = SpectrumBins(spec.frequencies_hz, spec.magnitudes ** 2, spec.resolution_hz)
        out[kind] = spec
    return out


def envelope_spectrum(signal: TimeSignal, kind, lower_hz: float = 1150.0,
                      upper_hz: float = 5100.0) -> SpectrumBins:
    """Envelope spectrum of ``signal`` restricted to the band [lower_hz, upper_hz].

    NES is the amplitude spectrum of the envelope, SES the squared amplitude
    spectrum of the squared envelope and LES the squared amplitude spectrum of
    the log squared envelope. Each transformed sequence is mean-removed first.
    """
    env = band_envelope(signal, lower_hz, upper_hz)
    kind = EnvelopeKind(kind)
    return spectra_from_envelope(env, signal.sample_rate_hz, (kind,))[kind]
