"""Synthetic geared-motor sounds with fault impulses and workshop noise.

A motor sound is a stationary base (broadband machine noise plus gear-mesh
tones with shaft modulation), an optional 8 kHz inverter tone, and for
faulty motors a train of short resonance impulses repeating once per
revolution of a chosen shaft. Contaminating noise is added on top, scaled
relative to the RMS of the motor base.

All randomness flows from integer seeds through ``numpy.random.default_rng``:
the motor part uses the stream ``(seed, 0)``, the contamination ``(seed, 1)``
and the hall background ``(seed, 2)``,
so the same motor can be rendered with and without contamination.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import InvalidConfig, InvalidManifest, InvalidSpec
from .gearbox import GearGeometry, shaft_frequencies
from .signal import TimeSignal, save_wav

HEALTH_LABELS = ("healthy", "minor_fault", "major_fault")
NOISE_KINDS = ("none", "hammering", "air_pressure", "electric_wrench", "speech", "music", "ventilation")
SPLITS = ("train", "test")
MANIFEST_HEADER = ("id", "path", "label", "noise_kind", "noise_level_db", "split")

RESONANCE_RANGE_HZ = (850.0, 5100.0)
INVERTER_HZ = 8000.0
# 60 dB SPL base level with 1.0 full scale = 1 Pa
BASE_RMS_PA = 0.02
# impulses decay to exp(-5) of their peak within 5 ms
IMPULSE_DECAY_S = 0.001
IMPULSE_RING_S = 0.005
HALL_IMPACTS_PER_S = 0.6

REFERENCE_GEOMETRY = GearGeometry(1375.0, (16, 40, 12, 48))


@dataclass(frozen=True)
class NoiseSpec:
    kind: str = "none"
    level_db_rel: float = 0.0
    window_s: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise InvalidSpec(f"noise kind {self.kind!r} not in {NOISE_KINDS}")
        if not math.isfinite(self.level_db_rel):
            raise InvalidSpec("noise level must be finite")
        if self.window_s is not None:
            start, stop = (float(v) for v in self.window_s)
            if not 0 <= start < stop:
                raise InvalidSpec(f"noise window {self.window_s} is not an interval in [0, inf)")
            object.__setattr__(self, "window_s", (start, stop))


@dataclass(frozen=True)
class SyntheticMotorSpec:
    """One motor: gearbox, health state and how a fault shows up.

    ``impulse_gain`` is the peak of each fault impulse relative to the base
    RMS; it is zero exactly for healthy motors. ``fault_shaft`` (1-based)
    selects the shaft whose revolution repeats the impulse, and
    ``impulse_dropout`` the probability that a revolution passes without one.
    ``gain_db`` models unit-to-unit and placement level differences.
    ``hall_level_db`` adds the production-hall background every recording
    carries (a murmur with occasional distant impacts), relative to the base
    RMS; ``None`` renders the motor in isolation.
    """

    geometry: GearGeometry = REFERENCE_GEOMETRY
    health: str = "healthy"
    resonance_hz: float = 2500.0
    impulse_gain: float = 0.0
    speed_jitter_rel: float = 0.01
    include_inverter_tone: bool = True
    fault_shaft: int = 1
    impulse_dropout: float = 0.0
    gain_db: float = 0.0
    hall_level_db: Optional[float] = None

    def __post_init__(self):
        if self.health not in HEALTH_LABELS:
            raise InvalidSpec(f"health {self.health!r} not in {HEALTH_LABELS}")
        lo, hi = RESONANCE_RANGE_HZ
        if not lo <= self.resonance_hz <= hi:
            raise InvalidSpec(f"resonance {self.resonance_hz} Hz outside [{lo}, {hi}]")
        if not self.impulse_gain >= 0:
            raise InvalidSpec("impulse_gain must be >= 0")
        if (self.impulse_gain == 0) != (self.health == "healthy"):
            raise InvalidSpec("impulse_gain must be zero exactly for healthy motors")
        if not 0 <= self.speed_jitter_rel < 0.5:
            raise InvalidSpec("speed_jitter_rel must lie in [0, 0.5)")
        if not 1 <= self.fault_shaft <= self.geometry.stage_count + 1:
            raise InvalidSpec(f"fault_shaft {self.fault_shaft} does not exist")
        if not 0 <= self.impulse_dropout < 1:
            raise InvalidSpec("impulse_dropout must lie in [0, 1)")

    @property
    def fault_frequency_hz(self) -> float:
        return float(shaft_frequencies(self.geometry)[self.fault_shaft - 1])


@dataclass(frozen=True)
class DatasetSample:
    id: str
    signal_path: str
    label: str
    noise: NoiseSpec
    split: str

    def __post_init__(self):
        if self.label not in HEALTH_LABELS:
            raise InvalidSpec(f"label {self.label!r} not in {HEALTH_LABELS}")
        if self.split not in SPLITS:
            raise InvalidSpec(f"split {self.split!r} not in {SPLITS}")
        if self.split == "train" and self.label == "major_fault":
            raise InvalidSpec("major faults never go into the train split")


def _rms(x) -> float:
    return float(np.sqrt(np.mean(np.square(x)))) if len(x) else 0.0


def band_noise(rng, n: int, fs: float, lo_hz: float, hi_hz: float, slope_db_oct: float = 0.0):
    """Unit-RMS Gaussian noise confined to [lo_hz, hi_hz] with a spectral tilt."""
    freqs = np.fft.rfftfreq(n, 1.0 / fs)
    shape = ((freqs >= lo_hz) & (freqs <= hi_hz)).astype(float)
    if slope_db_oct:
        ref = max(lo_hz, 1.0)
        shape *= (np.maximum(freqs, ref) / ref) ** (slope_db_oct / (20 * np.log10(2)))
    spec = (rng.standard_normal(freqs.size) + 1j * rng.standard_normal(freqs.size)) * shape
    x = np.fft.irfft(spec, n)
    r = _rms(x)
    return x / r if r > 0 else x


def _damped(t, freq_hz, decay_s):
    return np.exp(-t / decay_s) * np.sin(2 * np.pi * freq_hz * t)


def _impulse_times(rng, rate_hz: float, duration_s: float, jitter: float, dropout: float):
    times = []
    t = rng.uniform(0, 1.0 / rate_hz)
    while t < duration_s:
        if rng.uniform() >= dropout:
            times.append(t)
        t += (1.0 + rng.uniform(-jitter, jitter)) / rate_hz
    return np.array(times)


def _add_events(out, fs, times, amplitudes, kernel):
    """Overlap-add ``kernel`` at each event time (kernel sampled on its own grid)."""
    n = out.size
    for t0, a in zip(times, amplitudes):
        i = int(round(t0 * fs))
        if i >= n:
            continue
        m = min(kernel.size, n - i)
        out[i:i + m] += a * kernel[:m]


def motor_base(spec: SyntheticMotorSpec, n: int, fs: float, rng) -> np.ndarray:
    """Stationary machine sound at unit RMS: broadband noise plus modulated mesh tones."""
    t = np.arange(n) / fs
    f = shaft_frequencies(spec.geometry)
    x = band_noise(rng, n, fs, 50.0, min(12000.0, 0.45 * fs), slope_db_oct=-4.0)
    for s in range(1, spec.geometry.stage_count + 1):
        mesh = f[s - 1] * spec.geometry.teeth[2 * s - 2]
        # shaft-rate modulation produces the mesh sidebands of a healthy gearbox
        mod = 1.0 + 0.1 * np.cos(2 * np.pi * f[s - 1] * t + rng.uniform(0, 2 * np.pi)) \
            + 0.05 * np.cos(2 * np.pi * f[s] * t + rng.uniform(0, 2 * np.pi))
        for h in range(1, 6):
            if h * mesh >= 0.45 * fs:
                break
            x += 0.6 / h ** 1.5 * mod * np.sin(2 * np.pi * h * mesh * t + rng.uniform(0, 2 * np.pi))
    return x / _rms(x)


def fault_impulses(spec: SyntheticMotorSpec, n: int, fs: float, rng) -> np.ndarray:
    """Train of damped resonance impulses, peak ``impulse_gain`` per impulse on average."""
    out = np.zeros(n)
    if spec.impulse_gain == 0:
        return out
    times = _impulse_times(rng, spec.fault_frequency_hz, n / fs, spec.speed_jitter_rel, spec.impulse_dropout)
    tk = np.arange(int(round(IMPULSE_RING_S * fs))) / fs
    kernel = _damped(tk, spec.resonance_hz, IMPULSE_DECAY_S)
    kernel /= np.abs(kernel).max()
    amps = spec.impulse_gain * rng.lognormal(0.0, 0.25, times.size) * rng.choice([-1.0, 1.0], times.size)
    _add_events(out, fs, times, amps, kernel)
    return out


def _hammering(rng, n, fs):
    x = np.zeros(n)
    dur = n / fs
    hits = rng.uniform(0, dur, rng.integers(2, 7))
    tk = np.arange(int(0.08 * fs)) / fs
    for t0 in hits:
        ring = sum(_damped(tk, rng.uniform(900, 4500), rng.uniform(0.004, 0.015)) for _ in range(3))
        burst = rng.standard_normal(tk.size) * np.exp(-tk / 0.003)
        kernel = ring + 2.0 * burst
        _add_events(x, fs, [t0], [rng.uniform(0.5, 1.5)], kernel / np.abs(kernel).max())
    return x


def hall_background(rng, n, fs, level_db):
    """Production-hall ambience relative to a unit-RMS motor base.

    A broadband murmur at ``level_db`` plus a few impacts from neighbouring
    stations whose peaks reach the order of the motor's own RMS.
    """
    x = 10 ** (level_db / 20) * band_noise(rng, n, fs, 80.0, min(8000.0, 0.45 * fs), slope_db_oct=-3.0)
    dur = n / fs
    tk = np.arange(int(0.12 * fs)) / fs
    for t0 in rng.uniform(0, dur, rng.poisson(HALL_IMPACTS_PER_S * dur)):
        ring = sum(_damped(tk, rng.uniform(400, 4000), rng.uniform(0.005, 0.03)) for _ in range(3))
        click = rng.standard_normal(tk.size) * np.exp(-tk / 0.002)
        kernel = ring + click
        _add_events(x, fs, [t0], [rng.uniform(0.3, 2.0)], kernel / np.abs(kernel).max())
    return x


def _air_pressure(rng, n, fs):
    hiss = band_noise(rng, n, fs, 2500.0, min(16000.0, 0.45 * fs))
    # valve opening and closing: slow irregular level changes
    t = np.arange(n) / fs
    gate = 0.6 + 0.4 * np.sin(2 * np.pi * rng.uniform(0.2, 0.8) * t + rng.uniform(0, 2 * np.pi))
    return hiss * gate


def _ventilation(rng, n, fs):
    return band_noise(rng, n, fs, 30.0, 500.0, slope_db_oct=-3.0)


def _electric_wrench(rng, n, fs):
    t = np.arange(n) / fs
    whine = np.zeros(n)
    f0 = rng.uniform(180.0, 420.0)
    for h in range(1, 20):
        if h * f0 > 4500:
            break
        whine += np.sin(2 * np.pi * h * f0 * t + rng.uniform(0, 2 * np.pi)) / h ** 0.7
    # impact mechanism hammering at a few tens of Hz
    rate = rng.uniform(12.0, 40.0)
    am = 0.5 * (1 + np.sign(np.sin(2 * np.pi * rate * t))) * (0.5 + 0.5 * np.cos(2 * np.pi * rate * t))
    bursts = np.zeros(n)
    start = 0.0
    dur = n / fs
    while start < dur:
        on = rng.uniform(0.4, 1.2)
        a, b = int(start * fs), int(min(start + on, dur) * fs)
        bursts[a:b] = 1.0
        start += on + rng.uniform(0.2, 0.8)
    return whine * am * bursts


def _speech(rng, n, fs):
    t = np.arange(n) / fs
    x = np.zeros(n)
    f0 = rng.uniform(100.0, 220.0)
    glottal = sum(np.sin(2 * np.pi * h * f0 * (1 + 0.03 * np.sin(2 * np.pi * 0.7 * t)) * t) / h
                  for h in range(1, 25) if h * f0 < 4000)
    for formant in (rng.uniform(400, 900), rng.uniform(1000, 2200), rng.uniform(2300, 3500)):
        x += band_noise(rng, n, fs, formant * 0.8, formant * 1.2)
    x = 0.5 * x + glottal / _rms(glottal)
    # syllable rhythm around 4 Hz with pauses
    syll = np.clip(np.sin(2 * np.pi * rng.uniform(3.0, 5.0) * t + rng.uniform(0, 6)), 0, None) ** 2
    return x * syll


def _music(rng, n, fs):
    x = np.zeros(n)
    start = 0.0
    dur = n / fs
    while start < dur:
        length = rng.uniform(0.2, 0.5)
        a, b = int(start * fs), min(int((start + length) * fs), n)
        tn = np.arange(b - a) / fs
        f0 = 110.0 * 2 ** (rng.integers(0, 30) / 12)
        note = sum(np.sin(2 * np.pi * h * f0 * tn) / h for h in range(1, 12) if h * f0 < 4000)
        x[a:b] += note * np.exp(-tn / rng.uniform(0.1, 0.4))
        start += length
    return x + 0.2 * band_noise(rng, n, fs, 100.0, 4000.0) * _rms(x)


_NOISE_MAKERS = {
    "hammering": _hammering,
    "air_pressure": _air_pressure,
    "electric_wrench": _electric_wrench,
    "speech": _speech,
    "music": _music,
    "ventilation": _ventilation,
}


def contamination(noise: NoiseSpec, n: int, fs: float, rng, reference_rms: float) -> np.ndarray:
    """Noise track with RMS ``reference_rms * 10**(level/20)`` over its active window."""
    out = np.zeros(n)
    if noise.kind == "none":
        return out
    a, b = 0, n
    if noise.window_s is not None:
        a = min(int(round(noise.window_s[0] * fs)), n)
        b = min(int(round(noise.window_s[1] * fs)), n)
    if b - a < 2:
        return out
    x = _NOISE_MAKERS[noise.kind](rng, b - a, fs)
    r = _rms(x)
    if r > 0:
        out[a:b] = x * (reference_rms * 10 ** (noise.level_db_rel / 20) / r)
    return out


def synthesize_motor_sound(spec: SyntheticMotorSpec, noise: NoiseSpec = NoiseSpec(),
                           duration_s: float = 5.0, sample_rate_hz: float = 48000.0,
                           seed: int = 0) -> TimeSignal:
    """Render one motor recording in pascal (full scale 1.0 = 1 Pa)."""
    if not duration_s > 0:
        raise InvalidSpec("duration_s must be positive")
    if not sample_rate_hz > 2 * RESONANCE_RANGE_HZ[1]:
        raise InvalidSpec(f"sample rate {sample_rate_hz} Hz cannot carry the fault band")
    if noise.window_s is not None and noise.window_s[1] > duration_s + 1e-9:
        raise InvalidSpec(f"noise window {noise.window_s} exceeds the {duration_s} s signal")
    n = int(round(duration_s * sample_rate_hz))
    fs = float(sample_rate_hz)
    motor_rng = np.random.default_rng([seed, 0])
    noise_rng = np.random.default_rng([seed, 1])

    level = BASE_RMS_PA * 10 ** (spec.gain_db / 20)
    x = motor_base(spec, n, fs, motor_rng)
    x += fault_impulses(spec, n, fs, motor_rng)
    if spec.include_inverter_tone and INVERTER_HZ < 0.5 * fs:
        t = np.arange(n) / fs
        x += 0.3 * np.sin(2 * np.pi * INVERTER_HZ * t)
    if spec.hall_level_db is not None:
        x += hall_background(np.random.default_rng([seed, 2]), n, fs, spec.hall_level_db)
    x *= level
    x += contamination(noise, n, fs, noise_rng, level)
    return TimeSignal(x, fs)


def pure_tone(freq_hz: float, level_db_spl: float, duration_s: float, sample_rate_hz: float = 48000.0,
              am_hz: float = 0.0, am_depth: float = 0.0) -> TimeSignal:
    """Sine (optionally amplitude-modulated) whose overall RMS sits at ``level_db_spl``."""
    t = np.arange(int(round(duration_s * sample_rate_hz))) / sample_rate_hz
    x = (1 + am_depth * np.cos(2 * np.pi * am_hz * t)) * np.sin(2 * np.pi * freq_hz * t)
    x *= 20e-6 * 10 ** (level_db_spl / 20) / _rms(x)
    return TimeSignal(x, sample_rate_hz)


# --------------------------------------------------------------------------- dataset


@dataclass(frozen=True)
class DatasetConfig:
    """Split sizes and rendering parameters of a synthetic dataset.

    The defaults give 56 training samples (31 healthy, 25 minor faults) and 82
    test samples (30 healthy, 30 minor, 22 major faults); 43 test samples carry
    deliberate contamination, spread over the labels in proportion.
    """

    train_healthy: int = 31
    train_minor: int = 25
    test_healthy: int = 30
    test_minor: int = 30
    test_major: int = 22
    noisy_test: int = 43
    duration_s: float = 5.0
    sample_rate_hz: float = 48000.0
    geometry: GearGeometry = REFERENCE_GEOMETRY
    encoding: str = "float32"
    gain_spread_db: float = 3.5
    minor_gain: Tuple[float, float] = (0.1, 0.8)
    major_gain: Tuple[float, float] = (0.6, 4.0)
    noise_level_db: Tuple[float, float] = (-10.0, 5.0)
    hall_level_db: Tuple[float, float] = (-20.0, -8.0)
    noise_kinds: Tuple[str, ...] = ("hammering", "air_pressure", "electric_wrench", "speech", "music",
                                    "ventilation")

    def __post_init__(self):
        counts = (self.train_healthy, self.train_minor, self.test_healthy, self.test_minor,
                  self.test_major, self.noisy_test)
        if any(int(c) != c or c < 0 for c in counts):
            raise InvalidConfig(f"sample counts must be non-negative integers, got {counts}")
        if self.noisy_test > self.test_healthy + self.test_minor + self.test_major:
            raise InvalidConfig("more noisy samples than test samples")
        if not self.duration_s > 0 or not self.sample_rate_hz > 0:
            raise InvalidConfig("duration and sample rate must be positive")
        for kind in self.noise_kinds:
            if kind not in NOISE_KINDS or kind == "none":
                raise InvalidConfig(f"unknown noise kind {kind!r}")
        if not self.noise_kinds and self.noisy_test:
            raise InvalidConfig("noisy samples requested without noise kinds")

    @property
    def total(self) -> int:
        return (self.train_healthy + self.train_minor + self.test_healthy + self.test_minor
                + self.test_major)


def _allocate(total: int, sizes: Sequence[int]) -> List[int]:
    """Split ``total`` over groups in proportion to ``sizes`` (largest remainder, ties to first)."""
    whole = sum(sizes)
    if whole == 0:
        return [0] * len(sizes)
    exact = [total * s / whole for s in sizes]
    out = [int(math.floor(e)) for e in exact]
    order = sorted(range(len(sizes)), key=lambda i: (-(exact[i] - out[i]), i))
    for i in order[:total - sum(out)]:
        out[i] += 1
    return out


def sample_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def plan_dataset(config: DatasetConfig, seed: int):
    """Motor specs, noise specs and sample records without rendering any audio."""
    rng = np.random.default_rng([seed, 0xDA7A])
    rows = [("train", "healthy")] * config.train_healthy + [("train", "minor_fault")] * config.train_minor
    test_groups = [("healthy", config.test_healthy), ("minor_fault", config.test_minor),
                   ("major_fault", config.test_major)]
    noisy = _allocate(config.noisy_test, [c for _, c in test_groups])
    noisy_flags = [False] * len(rows)
    for (label, count), k in zip(test_groups, noisy):
        rows += [("test", label)] * count
        noisy_flags += [True] * k + [False] * (count - k)

    plan = []
    kind_cycle = 0
    for i, ((split, label), is_noisy) in enumerate(zip(rows, noisy_flags)):
        gain_db = rng.uniform(-config.gain_spread_db, config.gain_spread_db)
        resonance = rng.uniform(1500.0, 4500.0)
        shaft = int(rng.integers(1, config.geometry.stage_count + 2))
        if label == "healthy":
            impulse = 0.0
        else:
            lo, hi = config.minor_gain if label == "minor_fault" else config.major_gain
            impulse = rng.uniform(lo, hi)
        dropout = rng.uniform(0.0, 0.5)
        hall = rng.uniform(*config.hall_level_db)
        spec = SyntheticMotorSpec(config.geometry, label, resonance, impulse, fault_shaft=shaft,
                                  impulse_dropout=dropout, gain_db=gain_db, hall_level_db=hall)
        noise_level = rng.uniform(*config.noise_level_db)
        partial = rng.uniform() < 0.5
        window_len = rng.uniform(min(0.75, config.duration_s), config.duration_s)
        window_start = rng.uniform(0.0, config.duration_s - window_len)
        if is_noisy:
            kind = config.noise_kinds[kind_cycle % len(config.noise_kinds)]
            kind_cycle += 1
            window = (window_start, window_start + window_len) if partial else None
            noise = NoiseSpec(kind, round(noise_level, 2), window)
        else:
            noise = NoiseSpec()
        sample = DatasetSample(f"s{i:03d}", f"wav/s{i:03d}.wav", label, noise, split)
        plan.append((sample, spec, sample_seed(seed, i)))
    return plan


def generate_dataset(config: DatasetConfig, seed: int, out_dir) -> List[DatasetSample]:
    """Render every sample to ``out_dir/wav`` and write ``out_dir/manifest.csv``."""
    out_dir = Path(out_dir)
    plan = plan_dataset(config, seed)
    (out_dir / "wav").mkdir(parents=True, exist_ok=True)
    for sample, spec, s in plan:
        sig = synthesize_motor_sound(spec, sample.noise, config.duration_s, config.sample_rate_hz, s)
        save_wav(sig, out_dir / sample.signal_path, config.encoding)
    samples = [sample for sample, _, _ in plan]
    write_manifest(samples, out_dir / "manifest.csv")
    return samples


def write_manifest(samples: Sequence[DatasetSample], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(MANIFEST_HEADER)
        for s in samples:
            w.writerow([s.id, s.signal_path, s.label, s.noise.kind, f"{s.noise.level_db_rel:g}", s.split])


def read_manifest(path) -> List[DatasetSample]:
    """Manifest rows; noise windows are not stored, only kind and level."""
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            if tuple(reader.fieldnames or ()) != MANIFEST_HEADER:
                raise InvalidManifest(f"{path}: manifest header must be {','.join(MANIFEST_HEADER)}")
            return [DatasetSample(r["id"], r["path"], r["label"],
                                  NoiseSpec(r["noise_kind"], float(r["noise_level_db"])), r["split"])
                    for r in reader]
    except OSError as exc:
        raise InvalidManifest(f"cannot read manifest {path}: {exc}") from exc
    except (InvalidSpec, ValueError, TypeError) as exc:
        raise InvalidManifest(f"{path}: {exc}") from exc
