"""Time-varying roughness in the structure of the Daniel & Weber model.

The signal is split into 47 overlapping excitation channels spaced 0.5 Bark
apart (flat within +/-0.5 Bark, 27 dB/Bark lower slope, level-dependent
upper slope). Each channel envelope is weighted by a modulation band-pass
centred at 80 Hz, which puts maximum roughness at 70 Hz. In every 200 ms
frame the channel modulation depths are weighted along the Bark axis,
multiplied by the correlation with the channels one Bark below and above,
and summed in squares.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import SignalTooShort
from ..signal import TimeSignal
from .loudness import BAND_UPPER_BARK, EAR_TRANSMISSION, P_REF, frame_count

FRAME_PERIOD_S = 0.2
CHANNEL_BARK = 0.5 * np.arange(1, 48)
LOWER_SLOPE_DB = 27.0
MODULATION_PEAK_HZ = 80.0
MODULATION_Q = 0.6
ENVELOPE_RATE_HZ = 4000.0
CHANNEL_FLOOR_REL = 1e-6

# Bark weighting of channel contributions
_G_BARK = np.array([0, 1, 2.5, 4.9, 6.5, 8, 9, 10, 11, 11.5, 13, 17.5, 21, 24])
_G_VALUE = np.array([0, 0.35, 0.7, 0.7, 1.1, 1.25, 1.26, 1.18, 1.08, 1, 0.66, 0.46, 0.38, 0.3])
CHANNEL_WEIGHT = np.interp(CHANNEL_BARK, _G_BARK, _G_VALUE)

# frozen so that 1 kHz, 60 dB, 100 % AM at 70 Hz reads 1 asper
CALIBRATION = 0.22887


def bark(freq_hz):
    """Critical-band rate (Zwicker & Terhardt approximation)."""
    f = np.asarray(freq_hz, dtype=float)
    return 13.0 * np.arctan(0.00076 * f) + 3.5 * np.arctan((f / 7500.0) ** 2)


def threshold_in_quiet_db(freq_hz):
    """Absolute hearing threshold in dB SPL (Terhardt)."""
    f = np.maximum(np.asarray(freq_hz, dtype=float), 20.0) / 1000.0
    return 3.64 * f ** -0.8 - 6.5 * np.exp(-0.6 * (f - 3.3) ** 2) + 1e-3 * f ** 4


def ear_gain_db(freq_hz):
    """Free-field to inner-ear gain interpolated from the loudness transmission table."""
    lower = np.concatenate([[0.0], BAND_UPPER_BARK[:-2]])
    centres = 0.5 * (lower + BAND_UPPER_BARK[:-1])
    return -np.interp(bark(freq_hz), centres, EAR_TRANSMISSION)


def modulation_weight(mod_hz):
    """Band-pass weighting of envelope components, unity at 80 Hz, zero at DC."""
    f = np.asarray(mod_hz, dtype=float)
    with np.errstate(divide="ignore"):
        detune = f / MODULATION_PEAK_HZ - MODULATION_PEAK_HZ / f
        w = 1.0 / np.sqrt(1.0 + (MODULATION_Q * detune) ** 2)
    return np.where(f > 0, w, 0.0)


@dataclass(frozen=True)
class RoughnessSeries:
    values: np.ndarray
    frame_period_s: float = FRAME_PERIOD_S

    def __len__(self):
        return self.values.size


def _channel_envelopes(signal: TimeSignal):
    """Low-rate raw and modulation-weighted envelopes for all 47 channels."""
    x = signal.samples
    n = x.size
    fs = signal.sample_rate_hz
    spec = np.fft.rfft(x)
    freqs = np.fft.rfftfreq(n, 1.0 / fs)
    audible = (freqs >= 20.0) & (freqs <= min(20000.0, 0.5 * fs))
    lines = np.flatnonzero(audible)
    f = freqs[lines]
    z = bark(f)
    gain = ear_gain_db(f)

    # excitation level of each line: power within +/-0.5 Bark after ear transmission
    line_power = 2.0 * np.abs(spec[lines]) ** 2 / n ** 2 * 10 ** (gain / 10)
    cum = np.concatenate([[0.0], np.cumsum(line_power)])
    lo = np.searchsorted(z, z - 0.5)
    hi = np.searchsorted(z, z + 0.5, side="right")
    band_db = 10 * np.log10(np.maximum((cum[hi] - cum[lo]) / P_REF ** 2, 1e-12))
    keep = band_db > threshold_in_quiet_db(f)
    lines, f, z, gain, band_db = lines[keep], f[keep], z[keep], gain[keep], band_db[keep]
    upper_slope = np.minimum(-24.0 - 230.0 / f + 0.2 * band_db, -1.0)
    source = spec[lines] * 10 ** (gain / 20)

    n_env = max(int(round(n * ENVELOPE_RATE_HZ / fs)), 2)
    n_keep = n_env // 2 + 1
    mod_freqs = np.fft.rfftfreq(n, 1.0 / fs)[:n_keep]
    weight = modulation_weight(mod_freqs)

    raw = np.zeros((CHANNEL_BARK.size, n_env))
    weighted = np.zeros((CHANNEL_BARK.size, n_env))
    energy = np.zeros(CHANNEL_BARK.size)
    gains = []
    for i, zc in enumerate(CHANNEL_BARK):
        dz = zc - z
        att = np.where(dz < -0.5, LOWER_SLOPE_DB * (dz + 0.5),
                       np.where(dz > 0.5, upper_slope * (dz - 0.5), 0.0))
        g = 10 ** (att / 20)
        gains.append(g)
        energy[i] = np.sum(np.abs(source * g) ** 2)
    if lines.size == 0:
        return raw, weighted, n_env / signal.duration_s
    floor = CHANNEL_FLOOR_REL * energy.max()
    full = np.zeros(n, dtype=complex)
    for i, g in enumerate(gains):
        if energy[i] <= floor or energy[i] == 0:
            continue
        full[:] = 0
        full[lines] = 2.0 * source * g
        env = np.abs(np.fft.ifft(full))
        env_spec = np.fft.rfft(env)[:n_keep]
        scale = n_env / n
        raw[i] = np.fft.irfft(env_spec, n_env) * scale
        weighted[i] = np.fft.irfft(env_spec * weight, n_env) * scale
    return raw, weighted, n_env / signal.duration_s


def _frame_roughness(raw, weighted):
    """Roughness of one frame from (47, samples) raw and weighted envelopes."""
    h0 = raw.mean(axis=1)
    ac = weighted - weighted.mean(axis=1, keepdims=True)
    rms = np.sqrt(np.mean(ac ** 2, axis=1))
    depth = np.divide(rms, h0, out=np.zeros_like(rms), where=h0 > 0)
    depth = np.minimum(depth, 1.0)

    norms = np.sqrt(np.sum(ac ** 2, axis=1))
    corr = np.zeros(CHANNEL_BARK.size - 2)
    valid = (norms[:-2] > 0) & (norms[2:] > 0)
    corr[valid] = np.sum(ac[:-2] * ac[2:], axis=1)[valid] / (norms[:-2] * norms[2:])[valid]
    corr = np.clip(corr, 0.0, 1.0)
    below = np.concatenate([[0.0, 0.0], corr])   # channel i with i-2
    above = np.concatenate([corr, [0.0, 0.0]])   # channel i with i+2
    return float(np.sum((CHANNEL_WEIGHT * depth * below * above) ** 2))


def timevarying_roughness(signal: TimeSignal) -> RoughnessSeries:
    """Roughness in asper for consecutive, non-overlapping 200 ms frames."""
    if signal.duration_s < 0.4:
        raise SignalTooShort(f"roughness needs 0.4 s, got {signal.duration_s:.3f} s")
    raw, weighted, env_rate = _channel_envelopes(signal)
    frames = frame_count(signal.duration_s, FRAME_PERIOD_S)
    values = np.empty(frames)
    for k in range(frames):
        a = int(round(k * FRAME_PERIOD_S * env_rate))
        b = int(round((k + 1) * FRAME_PERIOD_S * env_rate))
        values[k] = CALIBRATION * _frame_roughness(raw[:, a:b], weighted[:, a:b])
    return RoughnessSeries(values)
