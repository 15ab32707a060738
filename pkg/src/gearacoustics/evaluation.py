"""ROC analysis, rater concordance and label aggregation."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import rankdata

from .errors import DegenerateInput, SingleClassInput

SEVERITY = ("healthy", "minor_fault", "major_fault")


@dataclass(frozen=True)
class RocCurve:
    """ROC points from threshold +inf down to the lowest score.

    ``thresholds[i]`` is the score cut that yields ``(fpr[i], tpr[i])``
    (positive iff score >= threshold); the first point uses +inf. The
    integer counts behind each point are kept for an exact area.
    """

    fpr: np.ndarray
    tpr: np.ndarray
    thresholds: np.ndarray
    false_positives: np.ndarray
    true_positives: np.ndarray

    @property
    def points(self):
        return list(zip(self.fpr.tolist(), self.tpr.tolist()))

    def __len__(self):
        return self.fpr.size


def roc_curve(scores, labels) -> RocCurve:
    """ROC of fault scores (higher = more faulty) against binary labels (1 = fault).

    Equal scores form one threshold step, so the curve moves diagonally
    through ties.
    """
    s = np.asarray(scores, dtype=float)
    y = np.asarray(labels).astype(bool)
    if s.shape != y.shape or s.ndim != 1:
        raise ValueError("scores and labels must be 1-D and of equal length")
    if np.isnan(s).any():
        raise ValueError("scores contain NaN")
    pos = int(y.sum())
    neg = y.size - pos
    if pos == 0 or neg == 0:
        raise SingleClassInput("ROC needs both positive and negative samples")
    order = np.argsort(-s, kind="mergesort")
    s, y = s[order], y[order]
    last_of_group = np.r_[np.flatnonzero(np.diff(s) != 0), s.size - 1]
    tp = np.r_[0, np.cumsum(y)[last_of_group]]
    fp = np.r_[0, np.cumsum(~y)[last_of_group]]
    thresholds = np.r_[np.inf, s[last_of_group]]
    return RocCurve(fp / neg, tp / pos, thresholds, fp, tp)


def auc(curve: RocCurve) -> float:
    """Trapezoidal area under the curve, evaluated in integer counts."""
    fp, tp = curve.false_positives, curve.true_positives
    twice_area = int(np.sum(np.diff(fp) * (tp[1:] + tp[:-1])))
    return twice_area / (2.0 * int(fp[-1]) * int(tp[-1]))


def auc_score(scores, labels) -> float:
    return auc(roc_curve(scores, labels))


def write_roc_csv(curve: RocCurve, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["fpr", "tpr", "threshold"])
        for f, t, th in zip(curve.fpr, curve.tpr, curve.thresholds):
            w.writerow([repr(float(f)), repr(float(t)), "inf" if np.isinf(th) else repr(float(th))])


def kendalls_w(rankings) -> float:
    """Kendall's coefficient of concordance with mid-ranks and tie correction.

    ``rankings`` is an (m raters x n items) array of ordinal values, for
    example severity grades; each row is converted to mid-ranks.
    """
    R = np.asarray(rankings, dtype=float)
    if R.ndim != 2 or R.shape[0] < 2 or R.shape[1] < 2:
        raise ValueError("need at least 2 raters and 2 items")
    m, n = R.shape
    ranks = np.vstack([rankdata(row) for row in R])
    totals = ranks.sum(axis=0)
    s = float(np.sum((totals - totals.mean()) ** 2))
    ties = 0.0
    for row in R:
        _, counts = np.unique(row, return_counts=True)
        ties += float(np.sum(counts ** 3 - counts))
    denom = m * m * (n ** 3 - n) - m * ties
    if denom <= 0:
        raise DegenerateInput("every rater ties all items; W is undefined")
    return 12.0 * s / denom


def aggregate_labels(votes: Sequence[str]) -> str:
    """Majority of three ordinal votes; a three-way split takes the middle severity."""
    votes = tuple(votes)
    if len(votes) != 3:
        raise ValueError(f"expected 3 votes, got {len(votes)}")
    for v in votes:
        if v not in SEVERITY:
            raise ValueError(f"unknown label {v!r}")
    for v in votes:
        if votes.count(v) >= 2:
            return v
    return sorted(votes, key=SEVERITY.index)[1]

