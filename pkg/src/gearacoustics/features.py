"""Named feature vectors."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np


@dataclass(frozen=True)
class FeatureVector:
    names: Tuple[str, ...]
    values: Tuple[float, ...]

    def __post_init__(self):
        names = tuple(self.names)
        values = tuple(float(v) for v in self.values)
        if len(names) != len(values):
            raise ValueError(f"{len(names)} names for {len(values)} values")
        if len(set(names)) != len(names):
            raise ValueError("feature names must be unique")
        if not all(np.isfinite(values)):
            raise ValueError("feature values must be finite")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, name: str) -> float:
        return self.values[self.names.index(name)]

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=float)

    def __add__(self, other: "FeatureVector") -> "FeatureVector":
        """Concatenation, left block first."""
        return FeatureVector(self.names + other.names, self.values + other.values)
