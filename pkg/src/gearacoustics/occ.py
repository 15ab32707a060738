"""Bagging-RandomMiner one-class classifier.

Each of ``T`` miners draws a bootstrap sample of the (z-scored) training set,
keeps a random fraction of the drawn rows as prototypes and learns a
distance scale ``delta`` from how far the bootstrap members lie from the
prototype set. A query scores ``exp(-d^2 / (2 delta^2))`` per miner, with
``d`` its distance to the nearest prototype, averaged over miners.

Seeding: miner ``t`` draws from ``numpy.random.default_rng((seed, t))``, so
a model is a pure function of (training matrix, T, p, seed) and miners can
be fitted in any order.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import DataError, DimensionMismatch, EmptyTrainingSet

MODEL_FORMAT = "gearacoustics-brm"
MODEL_VERSION = 1
STD_FLOOR = 1e-12
DELTA_FLOOR = 1e-9
# scores never underflow to zero
SCORE_FLOOR = np.finfo(float).tiny


@dataclass(frozen=True)
class Standardizer:
    mean: np.ndarray
    std: np.ndarray

    @classmethod
    def fit(cls, X) -> "Standardizer":
        X = np.asarray(X, dtype=float)
        return cls(X.mean(axis=0), np.maximum(X.std(axis=0), STD_FLOOR))

    def transform(self, X) -> np.ndarray:
        return (np.asarray(X, dtype=float) - self.mean) / self.std


@dataclass(frozen=True)
class Miner:
    prototypes: np.ndarray
    delta: float
    bootstrap_index: np.ndarray
    prototype_index: np.ndarray


@dataclass(frozen=True)
class BrmParams:
    bag_count: int = 100
    prototype_fraction: float = 0.1
    seed: int = 42

    def __post_init__(self):
        if int(self.bag_count) != self.bag_count or self.bag_count < 1:
            raise ValueError("bag_count must be a positive integer")
        if not 0 < self.prototype_fraction <= 1:
            raise ValueError("prototype_fraction must lie in (0, 1]")


@dataclass(frozen=True)
class OCCModel:
    miners: Tuple[Miner, ...]
    standardizer: Standardizer
    params: BrmParams
    feature_names: Tuple[str, ...] = ()

    @property
    def dimension(self) -> int:
        return self.standardizer.mean.size

    # ---- serialization

    def to_dict(self) -> dict:
        return {
            "format": MODEL_FORMAT,
            "version": MODEL_VERSION,
            "params": {"bag_count": self.params.bag_count,
                       "prototype_fraction": self.params.prototype_fraction,
                       "seed": self.params.seed},
            "feature_names": list(self.feature_names),
            "standardizer": {"mean": self.standardizer.mean.tolist(),
                             "std": self.standardizer.std.tolist()},
            "miners": [{"delta": m.delta,
                        "prototypes": m.prototypes.tolist(),
                        "bootstrap_index": m.bootstrap_index.tolist(),
                        "prototype_index": m.prototype_index.tolist()} for m in self.miners],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "OCCModel":
        if doc.get("format") != MODEL_FORMAT:
            raise DataError("not a BRM model document")
        if doc.get("version") != MODEL_VERSION:
            raise DataError(f"unsupported model version {doc.get('version')!r}")
        try:
            p = doc["params"]
            std = doc["standardizer"]
            miners = tuple(Miner(np.array(m["prototypes"], dtype=float).reshape(len(m["prototypes"]), -1),
                                 float(m["delta"]),
                                 np.array(m["bootstrap_index"], dtype=int),
                                 np.array(m["prototype_index"], dtype=int)) for m in doc["miners"])
            return cls(miners, Standardizer(np.array(std["mean"], dtype=float), np.array(std["std"], dtype=float)),
                       BrmParams(int(p["bag_count"]), float(p["prototype_fraction"]), int(p["seed"])),
                       tuple(doc.get("feature_names", ())))
        except (KeyError, TypeError, ValueError) as exc:
            raise DataError(f"malformed model document: {exc}") from exc

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> "OCCModel":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DataError(f"model is not valid JSON: {exc}") from exc
        return cls.from_dict(doc)


def _as_matrix(X) -> np.ndarray:
    if hasattr(X, "__len__") and len(X) and hasattr(X[0], "as_array"):
        X = [v.as_array() for v in X]
    try:
        M = np.asarray(X, dtype=float)
    except ValueError as exc:
        raise DimensionMismatch(f"training rows differ in length: {exc}") from exc
    if M.size == 0:
        raise EmptyTrainingSet("no training vectors")
    if M.ndim != 2:
        raise DimensionMismatch(f"training data must be a matrix, got shape {M.shape}")
    return M


def _nearest(points, prototypes) -> np.ndarray:
    """Euclidean distance from each point to every prototype, shape (points, prototypes)."""
    diff = points[:, None, :] - prototypes[None, :, :]
    return np.sqrt(np.sum(diff * diff, axis=2))


def fit_miner(Z, params: BrmParams, t: int) -> Miner:
    n = Z.shape[0]
    rng = np.random.default_rng((params.seed, t))
    boot = rng.integers(0, n, n)
    k = max(1, math.ceil(params.prototype_fraction * n))
    picks = np.sort(rng.choice(n, size=k, replace=False))
    protos = Z[boot[picks]]
    dist = _nearest(Z[boot], protos)
    # a bootstrap member never measures against its own draw as prototype
    dist[picks, np.arange(k)] = np.inf
    nearest = dist.min(axis=1)
    finite = np.isfinite(nearest)
    delta = float(nearest[finite].mean()) if finite.any() else 0.0
    return Miner(protos, max(delta, DELTA_FLOOR), boot, picks)


def fit_brm(train, bag_count: int = 100, prototype_fraction: float = 0.1, seed: int = 42,
            feature_names=()) -> OCCModel:
    """Fit the ensemble on rows of ``train`` (matrix or sequence of FeatureVector)."""
    if not feature_names and hasattr(train, "__len__") and len(train) and hasattr(train[0], "names"):
        feature_names = train[0].names
        if any(v.names != feature_names for v in train):
            raise DimensionMismatch("training vectors carry different feature names")
    X = _as_matrix(train)
    params = BrmParams(bag_count, prototype_fraction, seed)
    scaler = Standardizer.fit(X)
    Z = scaler.transform(X)
    miners = tuple(fit_miner(Z, params, t) for t in range(params.bag_count))
    return OCCModel(miners, scaler, params, tuple(feature_names))


def _queries(model: OCCModel, X) -> np.ndarray:
    if hasattr(X, "as_array"):
        X = X.as_array()
    Q = np.asarray(X, dtype=float)
    if Q.ndim == 1:
        Q = Q[None, :]
    if Q.ndim != 2 or Q.shape[1] != model.dimension:
        raise DimensionMismatch(f"model expects {model.dimension} features, got shape {Q.shape}")
    return model.standardizer.transform(Q)


def log_scores(model: OCCModel, X) -> np.ndarray:
    """Natural log of the similarity for each row of ``X``."""
    Z = _queries(model, X)
    per_miner = np.empty((len(model.miners), Z.shape[0]))
    for t, m in enumerate(model.miners):
        d = _nearest(Z, m.prototypes).min(axis=1)
        per_miner[t] = -(d * d) / (2.0 * m.delta ** 2)
    # log of the mean of exponentials, stable for very distant queries
    top = per_miner.max(axis=0)
    logs = top + np.log(np.mean(np.exp(per_miner - top), axis=0))
    return np.maximum(logs, np.log(SCORE_FLOOR))


def score_brm(model: OCCModel, x) -> float:
    """Similarity in (0, 1] of a single feature vector to the training class."""
    return float(np.exp(log_scores(model, x)[0]))


def score_many(model: OCCModel, X) -> np.ndarray:
    return np.exp(log_scores(model, X))


def classify(model: OCCModel, x, threshold: float) -> str:
    """``"accept"`` (healthy-like) iff the similarity reaches ``threshold``."""
    if not 0 <= threshold <= 1:
        raise ValueError("threshold must lie in [0, 1]")
    return "accept" if score_brm(model, x) >= threshold else "reject"
