"""Gear kinematics, fault-frequency enumeration and expert envelope features."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np

from .dsp import SpectrumBins
from .errors import SpectrumTooNarrow
from .features import FeatureVector


@dataclass(frozen=True)
class GearGeometry:
    """Spur/helical gear train described from motor shaft to output shaft.

    ``teeth`` lists driving and driven wheel per stage: (z1, z2, z3, z4, ...)
    where z1 drives z2 in stage 1, z3 drives z4 in stage 2 and so on.
    """

    rated_speed_rpm: float
    teeth: Tuple[int, ...]

    def __post_init__(self):
        teeth = tuple(int(z) for z in self.teeth)
        if not self.rated_speed_rpm > 0:
            raise ValueError("rated_speed_rpm must be positive")
        if len(teeth) < 2 or len(teeth) % 2:
            raise ValueError("teeth must hold a driving/driven pair per stage")
        if min(teeth) < 4:
            raise ValueError("every gear needs at least 4 teeth")
        object.__setattr__(self, "teeth", teeth)

    @property
    def stage_count(self) -> int:
        return len(self.teeth) // 2

    def stage_ratio(self, stage: int) -> Fraction:
        """Speed ratio f_stage / f_(stage+1) of a 1-based stage as an exact fraction."""
        return Fraction(self.teeth[2 * stage - 1], self.teeth[2 * stage - 2])

    @property
    def total_ratio(self) -> Fraction:
        ratio = Fraction(1)
        for s in range(1, self.stage_count + 1):
            ratio *= self.stage_ratio(s)
        return ratio

    def scaled_speed(self, factor: float) -> "GearGeometry":
        return GearGeometry(self.rated_speed_rpm * factor, self.teeth)


@dataclass(frozen=True)
class FaultFrequencySet:
    entries: Tuple[Tuple[str, float], ...]
    min_frequency_hz: float = 10.0

    @property
    def labels(self) -> List[str]:
        return [label for label, _ in self.entries]

    @property
    def frequencies_hz(self) -> np.ndarray:
        return np.array([f for _, f in self.entries], dtype=float)

    def __len__(self):
        return len(self.entries)


def shaft_frequencies(geometry: GearGeometry) -> np.ndarray:
    """Rotation frequency of each of the ``s + 1`` shafts in Hz."""
    freqs = [geometry.rated_speed_rpm / 60.0]
    for s in range(geometry.stage_count):
        z_drive, z_driven = geometry.teeth[2 * s], geometry.teeth[2 * s + 1]
        freqs.append(freqs[-1] * z_drive / z_driven)
    return np.array(freqs)


def enumerate_fault_frequencies(geometry: GearGeometry, k_max: int = 4,
                                min_hz: float = 10.0) -> FaultFrequencySet:
    """Shaft harmonics, gear-mesh frequencies and mesh sidebands.

    Order: harmonics ``k * f_n`` by shaft then k; meshes ``f_s * z_(2s-1)`` by
    stage; then per stage the sidebands ``mesh_s -/+ f_s`` and
    ``mesh_s -/+ f_(s+1)``. Entries below ``min_hz`` are dropped one by one, so
    a slow shaft still contributes its faster harmonics and its mesh sidebands.
    """
    f = shaft_frequencies(geometry)
    entries = []
    for n, fn in enumerate(f, start=1):
        for k in range(1, k_max + 1):
            entries.append((f"shaft{n}_k{k}", k * fn))
    meshes = []
    for s in range(1, geometry.stage_count + 1):
        mesh = f[s - 1] * geometry.teeth[2 * s - 2]
        meshes.append(mesh)
        entries.append((f"mesh{s}", mesh))
    for s, mesh in enumerate(meshes, start=1):
        for n in (s, s + 1):
            entries.append((f"mesh{s}_shaft{n}_lower", mesh - f[n - 1]))
            entries.append((f"mesh{s}_shaft{n}_upper", mesh + f[n - 1]))
    kept = tuple((label, float(freq)) for label, freq in entries if freq >= min_hz)
    return FaultFrequencySet(kept, float(min_hz))


def extract_expert_features(spectrum: SpectrumBins, ffs: FaultFrequencySet,
                            tolerance_rel: float = 0.01, prefix: str = "") -> FeatureVector:
    """Peak spectrum magnitude inside ``FF * (1 -/+ tolerance_rel)`` for every fault frequency.

    The window is inclusive at both edges; a window that contains no bin
    falls back to the bin nearest to the fault frequency.
    """
    freqs = spectrum.frequencies_hz
    mags = spectrum.magnitudes
    if len(ffs) and ffs.frequencies_hz.max() * (1 + tolerance_rel) > freqs[-1]:
        raise SpectrumTooNarrow(
            f"spectrum ends at {freqs[-1]:.1f} Hz, fault frequencies need "
            f"{ffs.frequencies_hz.max() * (1 + tolerance_rel):.1f} Hz")
    res = spectrum.resolution_hz
    values = []
    for _, ff in ffs.entries:
        # small slack so bins sitting exactly on an edge survive rounding
        eps = 1e-9 * res
        lo = int(np.ceil((ff * (1 - tolerance_rel) - eps) / res))
        hi = int(np.floor((ff * (1 + tolerance_rel) + eps) / res))
        if hi < lo:
            lo = hi = int(round(ff / res))
        values.append(float(mags[lo:hi + 1].max()))
    return FeatureVector(tuple(prefix + label for label in ffs.labels), tuple(values))
