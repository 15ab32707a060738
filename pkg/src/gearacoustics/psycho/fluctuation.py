"""Time-varying fluctuation strength from the specific-loudness pattern.

Slow loudness modulation is read per 1-Bark channel: the channel's specific
loudness series is weighted by ``2 / (f/4 Hz + 4 Hz/f)`` (unity at 4 Hz),
its Hilbert envelope is divided by the local mean loudness and the resulting
modulation depths are summed over audible channels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import signal as sps
from scipy.ndimage import uniform_filter1d

from ..errors import SignalTooShort
from ..signal import TimeSignal
from .loudness import FRAME_PERIOD_S, N_BARK, loudness_pattern

PEAK_HZ = 4.0
CHANNELS = 24
LOCAL_MEAN_S = 0.5
PAD_S = 1.0
LEAD_IN_S = 0.5
AUDIBLE_SONE_PER_BARK = 1e-3
# depths below this are rounding noise of a steady pattern
MIN_DEPTH = 1e-6

# frozen so that 1 kHz, 60 dB, 100 % AM at 4 Hz reads 1 vacil
CALIBRATION = 0.100149


@dataclass(frozen=True)
class FluctuationSeries:
    values: np.ndarray
    frame_period_s: float = FRAME_PERIOD_S

    def __len__(self):
        return self.values.size


def modulation_weight(mod_hz):
    f = np.asarray(mod_hz, dtype=float)
    with np.errstate(divide="ignore"):
        w = 2.0 / (f / PEAK_HZ + PEAK_HZ / f)
    return np.where(f > 0, w, 0.0)


def fluctuation_from_pattern(pattern) -> np.ndarray:
    """Fluctuation strength per frame from a (frames x 240) specific-loudness pattern."""
    pattern = np.asarray(pattern, dtype=float)
    frames = pattern.shape[0]
    chans = pattern.reshape(frames, CHANNELS, N_BARK // CHANNELS).mean(axis=2).T
    pad = min(int(round(PAD_S / FRAME_PERIOD_S)), frames - 1)
    padded = np.pad(chans, ((0, 0), (pad, pad)), mode="reflect")
    padded = padded - padded.mean(axis=1, keepdims=True)
    n = padded.shape[1]
    weight = modulation_weight(np.fft.rfftfreq(n, FRAME_PERIOD_S))
    slow = np.fft.irfft(np.fft.rfft(padded, axis=1) * weight, n, axis=1)
    env = np.abs(sps.hilbert(slow, axis=1))[:, pad:pad + frames]

    local = uniform_filter1d(chans, size=int(round(LOCAL_MEAN_S / FRAME_PERIOD_S)), axis=1, mode="nearest")
    audible = local > AUDIBLE_SONE_PER_BARK
    depth = np.divide(env, local, out=np.zeros_like(env), where=audible)
    depth[depth < MIN_DEPTH] = 0.0
    return CALIBRATION * np.minimum(depth, 1.0).sum(axis=0)


def timevarying_fluctuation(signal: TimeSignal) -> FluctuationSeries:
    """Fluctuation strength in vacil at the 2 ms loudness frame rate."""
    if signal.duration_s < 1.0:
        raise SignalTooShort(f"fluctuation needs 1.0 s, got {signal.duration_s:.3f} s")
    # an odd-reflected lead-in primes the filters, so the switch-on of the
    # recording does not read as modulation
    lead_frames = int(round(LEAD_IN_S / FRAME_PERIOD_S))
    x = signal.samples
    lead = min(int(round(lead_frames * FRAME_PERIOD_S * signal.sample_rate_hz)), x.size - 1)
    primed = signal.with_samples(np.concatenate([2 * x[0] - x[1:lead + 1][::-1], x]))
    _, pattern = loudness_pattern(primed)
    return FluctuationSeries(fluctuation_from_pattern(pattern[lead_frames:]))
