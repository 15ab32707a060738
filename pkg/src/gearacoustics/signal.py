"""Calibrated time signals and WAV input/output."""

from __future__ import annotations

import os
import wave
from dataclasses import dataclass

import numpy as np
from scipy.io import wavfile

from .errors import CorruptHeader, IoFailure, UnsupportedChannels, UnsupportedEncoding

ENCODINGS = ("pcm16", "pcm24", "float32")


@dataclass(frozen=True)
class TimeSignal:
    """Sampled sound pressure.

    Parameters
    ----------
    samples : ndarray
        Pressure values in pascal (already multiplied by the calibration).
    sample_rate_hz : float
        Sampling rate.
    calibration_pa_per_fullscale : float
        Pressure represented by digital full scale 1.0. Only needed when the
        signal is written back to disk.
    """

    samples: np.ndarray
    sample_rate_hz: float
    calibration_pa_per_fullscale: float = 1.0

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 1 or samples.size < 1:
            raise ValueError("samples must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples must be finite")
        if not self.sample_rate_hz > 0:
            raise ValueError("sample_rate_hz must be positive")
        if not self.calibration_pa_per_fullscale > 0:
            raise ValueError("calibration_pa_per_fullscale must be positive")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    def __len__(self):
        return self.samples.size

    @property
    def duration_s(self) -> float:
        return self.samples.size / self.sample_rate_hz

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.samples.size) / self.sample_rate_hz

    def with_samples(self, samples) -> "TimeSignal":
        """Same rate and calibration, new samples."""
        return TimeSignal(samples, self.sample_rate_hz, self.calibration_pa_per_fullscale)

    def scaled(self, gain: float) -> "TimeSignal":
        return self.with_samples(self.samples * gain)


def load_wav(path, calibration_pa_per_fullscale: float = 1.0) -> TimeSignal:
    """Read a mono WAV file as a calibrated :class:`TimeSignal`.

    PCM 16/24/32-bit and 32/64-bit float files are accepted. Integer data is
    scaled to [-1, 1) full scale before the calibration is applied.
    """
    try:
        rate, data = wavfile.read(os.fspath(path))
    except FileNotFoundError as exc:
        raise IoFailure(f"no such file: {path}") from exc
    except ValueError as exc:
        msg = str(exc)
        if "format" in msg.lower() and "unknown" in msg.lower():
            raise UnsupportedEncoding(msg) from exc
        raise CorruptHeader(f"{path}: {msg}") from exc
    except (EOFError, OSError) as exc:
        raise CorruptHeader(f"{path}: {exc}") from exc

    if data.ndim != 1:
        raise UnsupportedChannels(f"{path}: expected mono, got {data.shape[1]} channels")
    if data.dtype == np.int16:
        full = data / 32768.0
    elif data.dtype == np.int32:
        # 24-bit data arrives left-justified in int32
        full = data / 2147483648.0
    elif data.dtype in (np.float32, np.float64):
        full = data.astype(float)
    else:
        raise UnsupportedEncoding(f"{path}: unsupported sample type {data.dtype}")
    if rate <= 0:
        raise CorruptHeader(f"{path}: sample rate {rate}")
    return TimeSignal(full * calibration_pa_per_fullscale, float(rate), calibration_pa_per_fullscale)


def save_wav(signal: TimeSignal, path, encoding: str = "float32") -> None:
    """Write ``signal`` as a mono WAV file in full-scale units.

    Integer encodings clip at full scale; ``float32`` does not clip.
    """
    if encoding not in ENCODINGS:
        raise UnsupportedEncoding(f"encoding must be one of {ENCODINGS}")
    if not path or not os.fspath(path):
        raise IoFailure("empty output path")
    full = signal.samples / signal.calibration_pa_per_fullscale
    rate = int(round(signal.sample_rate_hz))
    try:
        if encoding == "float32":
            wavfile.write(os.fspath(path), rate, full.astype(np.float32))
        elif encoding == "pcm16":
            q = np.clip(np.round(full * 32768.0), -32768, 32767).astype("<i2")
            wavfile.write(os.fspath(path), rate, q)
        else:
            q = np.clip(np.round(full * 8388608.0), -8388608, 8388607).astype("<i4")
            raw = q.view(np.uint8).reshape(-1, 4)[:, :3].tobytes()
            with wave.open(os.fspath(path), "wb") as fh:
                fh.setnchannels(1)
                fh.setsampwidth(3)
                fh.setframerate(rate)
                fh.writeframes(raw)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
