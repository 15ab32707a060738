"""Psychoacoustic metrics and the feature vectors condensed from them."""

from .features import (SPA_NAMES, TVPA_NAMES, PsychoProfile, psycho_profile, spa_features,
                       tvpa_features)
from .fluctuation import FluctuationSeries, timevarying_fluctuation
from .loudness import LoudnessSeries, stationary_loudness, timevarying_loudness
from .roughness import RoughnessSeries, timevarying_roughness
from .stats import highpass_loudness, impulse_factor, kurtosis, variance
