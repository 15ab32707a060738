"""Pipeline configuration read from a TOML document.

Every key is optional; missing keys take the defaults below, which are the
analysis constants of the inspection pipeline (band 1150-5100 Hz, 10 Hz
fault-frequency floor, +/-1 % tolerance, four shaft harmonics).

.. code-block:: toml

    seed = 42

    [gearbox]
    rated_speed_rpm = 1375.0
    teeth = [16, 40, 12, 48]

    [analysis]
    lower_hz = 1150.0
    upper_hz = 5100.0
    min_fault_hz = 10.0
    tolerance = 0.01
    k_max = 4

    [occ]
    bag_count = 100
    prototype_fraction = 0.1

    [dataset]
    train_healthy = 31
    train_minor = 25
    test_healthy = 30
    test_minor = 30
    test_major = 22
    noisy_test = 43
    duration_s = 5.0
    sample_rate_hz = 48000.0
    encoding = "float32"

    [benchmark]
    feature_sets = ["nes", "ses", "les", "spa", "tvpa", "les+tvpa"]
    workers = 1

    [paths]
    data_dir = "data"
    out_dir = "out"

Relative paths are resolved against the directory holding the config file.
"""

from __future__ import annotations

import hashlib
import sys
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Tuple

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import InvalidConfig
from .gearbox import GearGeometry
from .occ import BrmParams
from .synth import DatasetConfig, REFERENCE_GEOMETRY

FEATURE_SETS = ("nes", "ses", "les", "spa", "tvpa", "les+tvpa")
ENCODINGS = ("pcm16", "pcm24", "float32")


@dataclass(frozen=True)
class AnalysisConfig:
    lower_hz: float = 1150.0
    upper_hz: float = 5100.0
    min_fault_hz: float = 10.0
    tolerance: float = 0.01
    k_max: int = 4


@dataclass(frozen=True)
class PipelineConfig:
    seed: int = 42
    geometry: GearGeometry = REFERENCE_GEOMETRY
    analysis: AnalysisConfig = AnalysisConfig()
    occ: BrmParams = BrmParams()
    dataset: DatasetConfig = DatasetConfig()
    feature_sets: Tuple[str, ...] = FEATURE_SETS
    workers: int = 1
    data_dir: Path = Path("data")
    out_dir: Path = Path("out")
    digest: str = field(default="", compare=False)

    def with_seed(self, seed: int) -> "PipelineConfig":
        return replace(self, seed=int(seed), occ=replace(self.occ, seed=int(seed)))


def _section(doc: dict, name: str) -> dict:
    sec = doc.get(name, {})
    if not isinstance(sec, dict):
        raise InvalidConfig(f"[{name}] must be a table")
    return sec


def _typed(section: dict, name: str, cls, converters: dict):
    known = {f.name for f in fields(cls)}
    unknown = set(section) - set(converters)
    if unknown:
        raise InvalidConfig(f"unknown keys in [{name}]: {', '.join(sorted(unknown))}")
    kwargs = {}
    for key, value in section.items():
        if key not in known:
            continue
        try:
            kwargs[key] = converters[key](value)
        except (TypeError, ValueError) as exc:
            raise InvalidConfig(f"[{name}] {key}: {exc}") from exc
    return kwargs


def _int(v):
    if isinstance(v, bool) or int(v) != v:
        raise ValueError(f"expected an integer, got {v!r}")
    return int(v)


def _float(v):
    if isinstance(v, bool):
        raise ValueError(f"expected a number, got {v!r}")
    return float(v)


def config_from_dict(doc: dict, base_dir: Path = Path("."), digest: str = "") -> PipelineConfig:
    top = set(doc) - {"seed", "gearbox", "analysis", "occ", "dataset", "benchmark", "paths"}
    if top:
        raise InvalidConfig(f"unknown top-level keys: {', '.join(sorted(top))}")
    try:
        seed = _int(doc.get("seed", 42))
        gb = _section(doc, "gearbox")
        extra = set(gb) - {"rated_speed_rpm", "teeth"}
        if extra:
            raise InvalidConfig(f"unknown keys in [gearbox]: {', '.join(sorted(extra))}")
        geometry = GearGeometry(_float(gb.get("rated_speed_rpm", REFERENCE_GEOMETRY.rated_speed_rpm)),
                                tuple(_int(z) for z in gb.get("teeth", REFERENCE_GEOMETRY.teeth)))

        analysis = AnalysisConfig(**_typed(_section(doc, "analysis"), "analysis", AnalysisConfig, {
            "lower_hz": _float, "upper_hz": _float, "min_fault_hz": _float, "tolerance": _float,
            "k_max": _int}))
        if not 0 < analysis.lower_hz < analysis.upper_hz:
            raise InvalidConfig("analysis band needs 0 < lower_hz < upper_hz")
        if not 0 <= analysis.tolerance < 1 or analysis.k_max < 1:
            raise InvalidConfig("tolerance must lie in [0, 1) and k_max be >= 1")

        occ = BrmParams(**_typed(_section(doc, "occ"), "occ", BrmParams, {
            "bag_count": _int, "prototype_fraction": _float}), seed=seed)

        ds = _typed(_section(doc, "dataset"), "dataset", DatasetConfig, {
            "train_healthy": _int, "train_minor": _int, "test_healthy": _int, "test_minor": _int,
            "test_major": _int, "noisy_test": _int, "duration_s": _float, "sample_rate_hz": _float,
            "encoding": str})
        if ds.get("encoding", "float32") not in ENCODINGS:
            raise InvalidConfig(f"dataset encoding must be one of {ENCODINGS}")
        dataset = DatasetConfig(geometry=geometry, **ds)

        bench = _section(doc, "benchmark")
        extra = set(bench) - {"feature_sets", "workers"}
        if extra:
            raise InvalidConfig(f"unknown keys in [benchmark]: {', '.join(sorted(extra))}")
        sets = tuple(str(s).lower() for s in bench.get("feature_sets", FEATURE_SETS))
        bad = [s for s in sets if s not in FEATURE_SETS]
        if bad or not sets:
            raise InvalidConfig(f"feature sets must be drawn from {FEATURE_SETS}, got {sets}")
        workers = _int(bench.get("workers", 1))
        if workers < 1:
            raise InvalidConfig("workers must be >= 1")

        paths = _section(doc, "paths")
        extra = set(paths) - {"data_dir", "out_dir"}
        if extra:
            raise InvalidConfig(f"unknown keys in [paths]: {', '.join(sorted(extra))}")
        data_dir = base_dir / str(paths.get("data_dir", "data"))
        out_dir = base_dir / str(paths.get("out_dir", "out"))
    except InvalidConfig:
        raise
    except (TypeError, ValueError) as exc:
        raise InvalidConfig(str(exc)) from exc
    return PipelineConfig(seed, geometry, analysis, occ, dataset, sets, workers, data_dir, out_dir, digest)


def config_digest(raw: bytes) -> str:
    return hashlib.sha256(raw).hexdigest()


def load_config(path=None) -> PipelineConfig:
    """Read a TOML config; ``None`` gives the defaults (digest of the empty document)."""
    if path is None:
        return config_from_dict({}, Path("."), config_digest(b""))
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise InvalidConfig(f"cannot read config {path}: {exc}") from exc
    try:
        doc = tomllib.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, tomllib.TOMLDecodeError) as exc:
        raise InvalidConfig(f"{path}: {exc}") from exc
    return config_from_dict(doc, path.parent, config_digest(raw))


DEFAULT_TOML = (__doc__.split(".. code-block:: toml\n\n", 1)[1].split("\n\nRelative paths", 1)[0]
                .replace("\n    ", "\n").lstrip() + "\n")
