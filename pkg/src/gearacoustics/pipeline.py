"""Feature extraction for every feature set and the AUC benchmark."""

from __future__ import annotations

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Sequence, Tuple

import numpy as np

from .config import FEATURE_SETS, PipelineConfig
from .dsp import analytic_envelope, design_fir_window, filter_zero_phase
from .envelope import EnvelopeKind, spectra_from_envelope
from .errors import DataError, DimensionMismatch, InvalidManifest
from .evaluation import auc_score
from .features import FeatureVector
from .gearbox import enumerate_fault_frequencies, extract_expert_features
from .occ import OCCModel, fit_brm, log_scores
from .psycho import psycho_profile, spa_features, tvpa_features
from .signal import TimeSignal, load_wav
from .synth import DatasetSample, generate_dataset, read_manifest

SET_LABELS = {"nes": "NES", "ses": "SES", "les": "LES", "spa": "SPA", "tvpa": "TVPA", "les+tvpa": "LES+TVPA"}
REPORT_HEADER = ("feature_set", "auc_h", "auc_f")


def extract_feature_sets(signal: TimeSignal, config: PipelineConfig,
                         sets: Sequence[str] = FEATURE_SETS) -> Dict[str, FeatureVector]:
    """All requested feature vectors of one recording.

    The signal is band-passed once; envelope spectra and psychoacoustic
    metrics are both computed on the band-limited signal.
    """
    a = config.analysis
    need = set()
    for s in sets:
        need.update(s.split("+"))
    kernel = design_fir_window(a.lower_hz, a.upper_hz, signal.sample_rate_hz, "band_pass")
    band = filter_zero_phase(signal, kernel)
    out = {}
    kinds = [k for k in EnvelopeKind if k.value.lower() in need]
    if kinds:
        ffs = enumerate_fault_frequencies(config.geometry, a.k_max, a.min_fault_hz)
        spectra = spectra_from_envelope(analytic_envelope(band.samples), signal.sample_rate_hz, kinds)
        for kind, spec in spectra.items():
            name = kind.value.lower()
            out[name] = extract_expert_features(spec, ffs, a.tolerance, prefix=name + "_")
    if need & {"spa", "tvpa"}:
        profile = psycho_profile(band)
        if "spa" in need:
            out["spa"] = spa_features(profile)
        if "tvpa" in need:
            out["tvpa"] = tvpa_features(profile)
    for s in sets:
        if "+" in s:
            parts = s.split("+")
            vec = out[parts[0]]
            for p in parts[1:]:
                vec = vec + out[p]
            out[s] = vec
    return {s: out[s] for s in sets}


def _extract_one(args):
    path, config, sets = args
    return extract_feature_sets(load_wav(path), config, sets)


@dataclass(frozen=True)
class FeatureTable:
    """Feature matrix of one feature set, rows in manifest order."""

    feature_set: str
    names: Tuple[str, ...]
    ids: Tuple[str, ...]
    labels: Tuple[str, ...]
    splits: Tuple[str, ...]
    values: np.ndarray

    def rows(self, split: str) -> np.ndarray:
        return np.array([s == split for s in self.splits])

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("id", "label", "split") + self.names)
            for i, row in enumerate(self.values):
                w.writerow([self.ids[i], self.labels[i], self.splits[i]] + [repr(float(v)) for v in row])

    @classmethod
    def read_csv(cls, path, feature_set: str = "") -> "FeatureTable":
        try:
            with open(path, newline="") as fh:
                rows = list(csv.reader(fh))
        except OSError as exc:
            raise DataError(f"cannot read feature table {path}: {exc}") from exc
        if not rows or tuple(rows[0][:3]) != ("id", "label", "split"):
            raise DataError(f"{path}: not a feature table")
        names = tuple(rows[0][3:])
        body = rows[1:]
        try:
            values = np.array([[float(v) for v in r[3:]] for r in body], dtype=float).reshape(len(body), len(names))
        except ValueError as exc:
            raise DataError(f"{path}: {exc}") from exc
        return cls(feature_set, names, tuple(r[0] for r in body), tuple(r[1] for r in body),
                   tuple(r[2] for r in body), values)


def extract_tables(samples: Sequence[DatasetSample], root, config: PipelineConfig,
                   sets: Sequence[str]) -> Dict[str, FeatureTable]:
    """Feature tables for every set, computing each recording once."""
    root = Path(root)
    jobs = [(root / s.signal_path, config, tuple(sets)) for s in samples]
    if config.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(config.workers) as pool:
            results = list(pool.map(_extract_one, jobs))
    else:
        results = [_extract_one(j) for j in jobs]
    tables = {}
    for name in sets:
        vecs = [r[name] for r in results]
        names = vecs[0].names if vecs else ()
        values = np.array([v.values for v in vecs], dtype=float).reshape(len(vecs), len(names))
        tables[name] = FeatureTable(name, names, tuple(s.id for s in samples), tuple(s.label for s in samples),
                                    tuple(s.split for s in samples), values)
    return tables


def fault_scores(model: OCCModel, X) -> np.ndarray:
    """Fault score ``-log(similarity)``: the same ordering as ``1 - similarity``
    without collapsing distant samples onto one tied value."""
    return -log_scores(model, X)


def train_model(table: FeatureTable, config: PipelineConfig) -> OCCModel:
    train = table.rows("train")
    if not train.any():
        raise DataError("no training rows in the feature table")
    p = config.occ
    return fit_brm(table.values[train], p.bag_count, p.prototype_fraction, p.seed, table.names)


def check_dimensions(model: OCCModel, table: FeatureTable) -> None:
    if model.dimension != len(table.names):
        raise DimensionMismatch(f"model was trained on {model.dimension} features, "
                                f"table {table.feature_set or ''} has {len(table.names)}")
    if model.feature_names and tuple(model.feature_names) != tuple(table.names):
        raise DimensionMismatch("model and table carry different feature names")


@dataclass(frozen=True)
class BenchmarkReport:
    rows: Tuple[Tuple[str, float, float], ...]
    seed: int
    config_digest: str

    def auc_f(self, name: str) -> float:
        return dict((r[0], r[2]) for r in self.rows)[name]

    def auc_h(self, name: str) -> float:
        return dict((r[0], r[1]) for r in self.rows)[name]

    def to_csv(self) -> str:
        lines = [",".join(REPORT_HEADER)]
        lines += [f"{name},{h!r},{f!r}" for name, h, f in self.rows]
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {"seed": self.seed, "config_digest": self.config_digest,
               "rows": [{"feature_set": n, "auc_h": h, "auc_f": f} for n, h, f in self.rows]}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def write(self, out_dir) -> Tuple[Path, Path]:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        csv_path, json_path = out_dir / "benchmark.csv", out_dir / "benchmark.json"
        csv_path.write_text(self.to_csv())
        json_path.write_text(self.to_json())
        return csv_path, json_path


def evaluate_tables(tables: Dict[str, FeatureTable], config: PipelineConfig) -> BenchmarkReport:
    rows = []
    for name, table in tables.items():
        model = train_model(table, config)
        test = table.rows("test")
        if not test.any():
            raise DataError("no test rows to evaluate")
        scores = fault_scores(model, table.values[test])
        labels = np.array(table.labels)[test]
        auc_h = auc_score(scores, labels != "healthy")
        auc_f = auc_score(scores, labels == "major_fault")
        rows.append((SET_LABELS[name], auc_h, auc_f))
    return BenchmarkReport(tuple(rows), config.seed, config.digest)


def benchmark_run(config: PipelineConfig, manifest_path=None) -> Tuple[BenchmarkReport, Dict[str, FeatureTable]]:
    """Generate the dataset if needed, extract features, fit on train, score test.

    AUC_h counts minor and major faults as positives, AUC_f only major faults.
    """
    if manifest_path is None:
        manifest_path = Path(config.data_dir) / "manifest.csv"
        if not manifest_path.exists():
            generate_dataset(config.dataset, config.seed, config.data_dir)
    manifest_path = Path(manifest_path)
    samples = read_manifest(manifest_path)
    if any(s.split == "train" and s.label == "major_fault" for s in samples):
        raise InvalidManifest("the train split contains major faults")
    tables = extract_tables(samples, manifest_path.parent, config, config.feature_sets)
    return evaluate_tables(tables, config), tables

