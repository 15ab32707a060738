"""Acoustic end-of-line inspection of geared motors.

Envelope-spectrum expert features, psychoacoustic metrics and a
Bagging-RandomMiner one-class classifier, plus a synthetic motor-sound
generator and the AUC benchmark that ties them together.
"""

from .config import PipelineConfig, load_config
from .dsp import FilterKernel, SpectrumBins, analytic_envelope, design_fir_window, filter_zero_phase, zero_phase
from .envelope import EnvelopeKind, envelope_spectrum
from .errors import DataError, DimensionMismatch, GearAcousticsError
from .evaluation import RocCurve, aggregate_labels, auc, auc_score, kendalls_w, roc_curve
from .features import FeatureVector
from .gearbox import FaultFrequencySet, GearGeometry, enumerate_fault_frequencies, extract_expert_features
from .occ import BrmParams, OCCModel, classify, fit_brm, score_brm
from .pipeline import BenchmarkReport, benchmark_run
from .signal import TimeSignal, load_wav, save_wav

__version__ = "0.1.0"
