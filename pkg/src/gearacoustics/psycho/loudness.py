"""Zwicker loudness for stationary and time-varying free-field sounds.

The core follows the DIN 45631 / ISO 532-1 program structure: third-octave
levels, low-frequency equal-loudness corrections, core loudness per critical
band, upward spread of masking and integration over the Bark axis. The
masking slopes are evaluated on the 0.1 Bark output grid, which lets one
call handle thousands of 2 ms frames at once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import signal as sps

from ..errors import SignalTooShort
from ..signal import TimeSignal

P_REF = 20e-6
FRAME_PERIOD_S = 0.002
BARK_STEP = 0.1
N_BARK = 240
BARK_AXIS = BARK_STEP * np.arange(1, N_BARK + 1)

# exact base-10 third-octave centres, nominal 25 Hz .. 12.5 kHz
THIRD_OCTAVE_CENTERS = 1000.0 * 10.0 ** (np.arange(-16, 12) / 10.0)
THIRD_OCTAVE_EDGES = np.stack([THIRD_OCTAVE_CENTERS * 10 ** (-1 / 20),
                               THIRD_OCTAVE_CENTERS * 10 ** (1 / 20)], axis=1)

# level ranges and reductions for the 11 bands up to 250 Hz (equal-loudness contours)
LOW_FREQ_RANGES = np.array([45, 55, 65, 71, 80, 90, 100, 120], dtype=float)
LOW_FREQ_REDUCTIONS = np.array([
    [-32, -24, -16, -10, -5, 0, -7, -3, 0, -2, 0],
    [-29, -22, -15, -10, -4, 0, -7, -2, 0, -2, 0],
    [-27, -19, -14, -9, -4, 0, -6, -2, 0, -2, 0],
    [-25, -17, -12, -9, -3, 0, -5, -2, 0, -2, 0],
    [-23, -16, -11, -7, -3, 0, -4, -1, 0, -1, 0],
    [-20, -14, -10, -6, -3, 0, -4, -1, 0, -1, 0],
    [-18, -12, -9, -6, -2, 0, -3, -1, 0, -1, 0],
    [-15, -10, -8, -4, -2, 0, -3, -1, 0, -1, 0],
], dtype=float)

# critical-band level at threshold in quiet
THRESHOLD_LEVEL = np.array([30, 18, 12, 8, 7, 6, 5, 4, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3], dtype=float)
# free-field transmission to the inner ear (subtracted from band levels)
EAR_TRANSMISSION = np.array([0, 0, 0, 0, 0, 0, 0, 0, 0, 0, -0.5, -1.6, -3.2, -5.4, -5.6, -4.0,
                             -1.5, 2.0, 5.0, 12.0])
# third-octave to critical-band level adaptation
BAND_ADAPTATION = np.array([-0.25, -0.6, -0.8, -0.8, -0.5, 0, 0.5, 1.1, 1.5, 1.7, 1.8, 1.8, 1.7,
                            1.6, 1.4, 1.2, 0.8, 0.5, 0, -0.5])
# upper Bark limit of each approximated critical band
BAND_UPPER_BARK = np.array([0.9, 1.8, 2.8, 3.5, 4.4, 5.4, 6.6, 7.9, 9.2, 10.6, 12.3, 13.8, 15.2,
                            16.7, 18.1, 19.3, 20.6, 21.8, 22.7, 23.6, 24.0])
# specific-loudness ranges selecting the upper-slope steepness
SLOPE_RANGES = np.array([21.5, 18.0, 15.1, 11.5, 9.0, 6.1, 4.4, 3.1, 2.13, 1.36, 0.82, 0.42,
                         0.30, 0.22, 0.15, 0.10, 0.035, 0.0])
# upper-slope steepness in sone/Bark per Bark, rows: range, columns: band group
SLOPE_STEEPNESS = np.array([
    [13.00, 8.20, 6.30, 5.50, 5.50, 5.50, 5.50, 5.50],
    [9.00, 7.50, 6.00, 5.10, 4.50, 4.50, 4.50, 4.50],
    [7.80, 6.70, 5.60, 4.90, 4.40, 3.90, 3.90, 3.90],
    [6.20, 5.40, 4.60, 4.00, 3.50, 3.20, 3.20, 3.20],
    [4.50, 3.80, 3.60, 3.20, 2.90, 2.70, 2.70, 2.70],
    [3.70, 3.00, 2.80, 2.35, 2.20, 2.20, 2.20, 2.20],
    [2.90, 2.30, 2.10, 1.90, 1.80, 1.70, 1.70, 1.70],
    [2.40, 1.70, 1.50, 1.35, 1.30, 1.30, 1.30, 1.30],
    [1.95, 1.45, 1.30, 1.15, 1.10, 1.10, 1.10, 1.10],
    [1.50, 1.20, 0.94, 0.86, 0.82, 0.82, 0.82, 0.82],
    [0.72, 0.67, 0.64, 0.63, 0.62, 0.62, 0.62, 0.62],
    [0.59, 0.53, 0.51, 0.50, 0.42, 0.42, 0.42, 0.42],
    [0.40, 0.33, 0.26, 0.24, 0.22, 0.22, 0.22, 0.22],
    [0.27, 0.21, 0.20, 0.18, 0.17, 0.17, 0.17, 0.17],
    [0.16, 0.15, 0.14, 0.12, 0.11, 0.11, 0.11, 0.11],
    [0.12, 0.11, 0.10, 0.08, 0.08, 0.08, 0.08, 0.08],
    [0.09, 0.08, 0.07, 0.06, 0.06, 0.06, 0.06, 0.05],
    [0.06, 0.05, 0.03, 0.02, 0.02, 0.02, 0.02, 0.02],
])

# band of every grid point and its steepness column
_GRID_BAND = np.searchsorted(BAND_UPPER_BARK + 1e-6, BARK_AXIS)
_GRID_SLOPE_COLUMN = np.clip(_GRID_BAND - 1, 0, 7)
_MAX_RANGE_SWITCHES = 4

# time-varying smoothing and temporal weighting
SPECIFIC_DECAY_S = 0.015
WEIGHT_FAST = (0.47, 0.0035)
WEIGHT_SLOW = (0.53, 0.070)
SILENCE_DB = -60.0


def core_loudness(levels) -> np.ndarray:
    """Main loudness of the 20 approximated critical bands (plus a trailing zero band).

    ``levels`` has shape ``(..., 28)``; the result has shape ``(..., 21)``.
    """
    lt = np.asarray(levels, dtype=float)
    low = lt[..., :11]
    # first contour range whose limit is not exceeded; levels above all ranges use the last
    corrected = low + LOW_FREQ_REDUCTIONS[-1]
    for j in range(len(LOW_FREQ_RANGES) - 2, -1, -1):
        inside = low <= LOW_FREQ_RANGES[j] - LOW_FREQ_REDUCTIONS[j]
        corrected = np.where(inside, low + LOW_FREQ_REDUCTIONS[j], corrected)
    intensity = 10 ** (corrected / 10)
    groups = np.stack([intensity[..., 0:6].sum(-1), intensity[..., 6:9].sum(-1),
                       intensity[..., 9:11].sum(-1)], axis=-1)
    lcb = 10 * np.log10(np.maximum(groups, 1e-30))

    le = np.concatenate([lcb, lt[..., 11:28]], axis=-1) - EAR_TRANSMISSION
    above = le > THRESHOLD_LEVEL
    le = le - BAND_ADAPTATION
    nm = 0.0635 * 10 ** (0.025 * THRESHOLD_LEVEL) * (
        (0.75 + 0.25 * 10 ** (0.1 * (le - THRESHOLD_LEVEL))) ** 0.25 - 1)
    nm = np.where(above, np.maximum(nm, 0.0), 0.0)
    # absolute-threshold dependence within the lowest band
    nm[..., 0] *= np.minimum(0.4 + 0.32 * nm[..., 0] ** 0.2, 1.0)
    return np.concatenate([nm, np.zeros(nm.shape[:-1] + (1,))], axis=-1)


def specific_loudness(levels):
    """Specific loudness on the 0.1..24 Bark grid and total loudness.

    Returns ``(pattern, total)`` with shapes ``(..., 240)`` and ``(...)``. The
    total integrates the piecewise-linear masking slopes exactly inside every
    grid step, switching steepness whenever a slope crosses a range limit.
    """
    nm = core_loudness(levels)
    flat = nm.reshape(-1, nm.shape[-1])
    count = flat.shape[0]
    out = np.empty((count, N_BARK))
    total = np.zeros(count)
    prev = np.zeros(count)
    for k in range(N_BARK):
        main = flat[:, _GRID_BAND[k]]
        col = _GRID_SLOPE_COLUMN[k]
        val = prev
        rem = np.full(count, BARK_STEP)
        for _ in range(_MAX_RANGE_SWITCHES):
            j = np.minimum((SLOPE_RANGES[None, :] >= val[:, None]).sum(axis=1), 17)
            steep = SLOPE_STEEPNESS[j, col]
            target = np.maximum(SLOPE_RANGES[j], main)
            dz = np.clip((val - target) / steep, 0.0, rem)
            new = val - steep * dz
            total += dz * (val + new) / 2
            val = new
            rem = rem - dz
        val = np.maximum(val, main)
        total += rem * val
        out[:, k] = val
        prev = val
    return out.reshape(nm.shape[:-1] + (N_BARK,)), total.reshape(nm.shape[:-1])


@dataclass(frozen=True)
class LoudnessSeries:
    values: np.ndarray
    frame_period_s: float = FRAME_PERIOD_S
    start_time_s: float = 0.0

    def __len__(self):
        return self.values.size


def _to_db(mean_square):
    return 10 * np.log10(np.maximum(mean_square / P_REF ** 2, 10 ** (SILENCE_DB / 10)))


def third_octave_filterbank(signal: TimeSignal, frames: int = 0):
    """Third-octave levels from a Butterworth filterbank.

    Returns ``(frame_levels, long_term_levels)``: levels of the smoothed squared
    band outputs sampled at the end of each of ``frames`` 2 ms frames, and the
    mean-square level of each band over the whole signal, both in dB SPL.
    Bands reaching Nyquist are left at the silence floor.
    """
    fs = signal.sample_rate_hz
    x = signal.samples
    ends = np.floor(np.arange(1, frames + 1) * FRAME_PERIOD_S * fs + 1e-9).astype(int) - 1
    frame_levels = np.full((frames, THIRD_OCTAVE_CENTERS.size), SILENCE_DB)
    long_term = np.full(THIRD_OCTAVE_CENTERS.size, SILENCE_DB)
    for b, (fc, (lo, hi)) in enumerate(zip(THIRD_OCTAVE_CENTERS, THIRD_OCTAVE_EDGES)):
        if hi >= fs / 2:
            continue
        sos = sps.butter(3, [lo, hi], btype="bandpass", fs=fs, output="sos")
        sq = sps.sosfilt(sos, x) ** 2
        long_term[b] = _to_db(sq.mean())
        if frames:
            tau = 2.0 / (3.0 * fc) if fc <= 1000 else 2.0 / 3000.0
            a = np.exp(-1.0 / (fs * tau))
            # three cascaded first-order low-passes
            lp = np.tile([1 - a, 0, 0, 1, -a, 0], (3, 1))
            frame_levels[:, b] = _to_db(sps.sosfilt(lp, sq)[ends])
    return frame_levels, long_term


def stationary_loudness(signal: TimeSignal):
    """Total loudness in sone and specific loudness per 0.1 Bark of a stationary sound."""
    if signal.duration_s < 0.5:
        raise SignalTooShort(f"stationary loudness needs 0.5 s, got {signal.duration_s:.3f} s")
    _, levels = third_octave_filterbank(signal)
    pattern, total = specific_loudness(levels)
    return float(total), pattern


def frame_count(duration_s: float, period_s: float) -> int:
    return int(np.floor(duration_s / period_s + 1e-9))


def loudness_from_levels(frame_levels):
    """Temporal processing of per-frame third-octave levels.

    Returns the weighted total loudness per frame and the held specific
    loudness pattern (frames x 240).
    """
    pattern, area = specific_loudness(frame_levels)
    frames = pattern.shape[0]
    # instantaneous rise, exponential decay of specific loudness
    decay = np.exp(-FRAME_PERIOD_S / SPECIFIC_DECAY_S)
    held = np.empty_like(pattern)
    state = np.zeros(N_BARK)
    for t in range(frames):
        state = np.maximum(pattern[t], state * decay)
        held[t] = state

    raw = pattern.sum(axis=1)
    stretch = np.divide(held.sum(axis=1), raw, out=np.ones(frames), where=raw > 0)
    total = area * stretch
    weighted = np.zeros(frames)
    for weight, tau in (WEIGHT_FAST, WEIGHT_SLOW):
        a = np.exp(-FRAME_PERIOD_S / tau)
        weighted += weight * sps.lfilter([1 - a], [1, -a], total)
    return weighted, held


def loudness_pattern(signal: TimeSignal):
    """Time-varying total loudness (sone) and held specific loudness (frames x 240)."""
    if signal.duration_s < 0.1:
        raise SignalTooShort(f"time-varying loudness needs 0.1 s, got {signal.duration_s:.3f} s")
    frames = frame_count(signal.duration_s, FRAME_PERIOD_S)
    frame_levels, _ = third_octave_filterbank(signal, frames)
    return loudness_from_levels(frame_levels)


def timevarying_loudness(signal: TimeSignal) -> LoudnessSeries:
    """Loudness in sone for every 2 ms frame."""
    values, _ = loudness_pattern(signal)
    return LoudnessSeries(values)
